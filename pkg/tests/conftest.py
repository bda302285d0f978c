from hypothesis import settings

settings.register_profile("repro", derandomize=True, database=None)
settings.load_profile("repro")

# lines recorded by test_acceptance.py, echoed after the run even without -s
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
