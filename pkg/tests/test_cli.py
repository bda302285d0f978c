import csv
import io
import json
from pathlib import Path

import jsonschema
import numpy as np
import pytest

from concavekit import cli, export, suites
from concavekit import conclass as cc
from concavekit import functionals as fn
from concavekit.report import Status, VerificationReport

SCHEMA = json.loads((Path(__file__).parents[1] / "docs" / "report.schema.json").read_text())
SMALL = dict(n_random=5)


def run(argv):
    out = io.StringIO()
    code = cli.main(argv, out)
    return code, out.getvalue()


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


# configuration and registry


def test_registered_suites():
    assert set(suites.SUITE_IDS) == {
        "thm1-disk", "thm2-fixed-a", "cor-norm-bounds", "cor-norm-fixed", "thm1a-distortion", "hp-means",
        "thm3-conv", "thm4-kaplan", "thm5-coeff", "adde2-extremal", "thm6-lambda", "cor-region",
    }


@pytest.mark.parametrize(
    "bad",
    [dict(alphas=(2.5,)), dict(alphas=()), dict(order=4), dict(r_max=1.0), dict(r_cap=0.5),
     dict(r_test=0.7), dict(n_random=0), dict(seed=-1)],
)
def test_config_guards(bad):
    with pytest.raises(suites.ConfigError):
        suites.RunConfig(**bad).validate()


def test_unknown_suite():
    with pytest.raises(suites.ConfigError):
        suites.run_suite(suites.RunConfig(), "thm9")


def test_rng_streams_are_independent_of_order():
    a = suites.suite_rng(42, "thm1-disk").random(3)
    suites.suite_rng(42, "thm2-fixed-a").random(3)
    b = suites.suite_rng(42, "thm1-disk").random(3)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, suites.suite_rng(42, "hp-means").random(3))


@pytest.mark.parametrize("sid", ["thm1-disk", "thm2-fixed-a", "thm1a-distortion", "adde2-extremal", "cor-region"])
def test_small_suites_pass(sid):
    rep = suites.run_suite(suites.RunConfig(seed=3, **SMALL), sid)
    assert rep.status is Status.PASS and rep.margin >= 0 and rep.seed == 3


def test_report_invariant():
    with pytest.raises(ValueError):
        VerificationReport("x", Status.PASS, -1.0, 1)


def test_exit_codes_from_statuses():
    p = VerificationReport("a", "pass", 0.0, 1)
    f = VerificationReport("b", "fail", -1.0, 1)
    i = VerificationReport("c", "inconclusive", 0.0, 1)
    assert suites.exit_code([p]) == 0
    assert suites.exit_code([p, i]) == 2
    assert suites.exit_code([i, f]) == 1


# command line


def test_verify_writes_schema_valid_json(tmp_path):
    path = tmp_path / "r.json"
    code, out = run(["verify", "--suite", "thm1-disk", "--suite", "cor-region", "--seed", "7",
                     "--n-random", "5", "--json", str(path)])
    assert code == 0 and "overall: pass" in out
    doc = json.loads(path.read_text())
    jsonschema.validate(doc, SCHEMA, cls=jsonschema.Draft202012Validator)
    assert [r["suite_id"] for r in doc["reports"]] == ["thm1-disk", "cor-region"]
    assert "wall_time_ms" not in doc["reports"][0]


def test_verify_is_reproducible(tmp_path):
    args = ["verify", "--suite", "thm2-fixed-a", "--seed", "42", "--n-random", "5", "--json"]
    run(args + [str(tmp_path / "a.json")])
    run(args + [str(tmp_path / "b.json")])
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_timings_opt_in(tmp_path):
    path = tmp_path / "t.json"
    run(["verify", "--suite", "cor-region", "--timings", "--json", str(path)])
    doc = json.loads(path.read_text())
    jsonschema.validate(doc, SCHEMA, cls=jsonschema.Draft202012Validator)
    assert "wall_time_ms" in doc["reports"][0]


def test_seed_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.SEED_ENV, "123")
    path = tmp_path / "s.json"
    run(["verify", "--suite", "cor-region", "--json", str(path)])
    assert json.loads(path.read_text())["config"]["seed"] == 123
    monkeypatch.setenv(cli.SEED_ENV, "abc")
    assert run(["verify", "--suite", "cor-region"])[0] == cli.EXIT_CONFIG
    monkeypatch.delenv(cli.SEED_ENV)
    run(["verify", "--suite", "cor-region", "--json", str(path)])
    assert json.loads(path.read_text())["config"]["seed"] == 0


def test_config_errors_exit_64():
    assert run(["verify", "--alpha", "2.5"])[0] == 64
    assert run(["verify", "--order", "3"])[0] == 64
    with pytest.raises(SystemExit) as exc:
        run(["verify", "--suite", "nope"])
    assert exc.value.code == 64
    with pytest.raises(SystemExit) as exc:
        run(["export", "--curve", "distortion"])
    assert exc.value.code == 64


@pytest.mark.parametrize("status,code", [(Status.FAIL, 1), (Status.INCONCLUSIVE, 2)])
def test_non_passing_exit_codes(monkeypatch, status, code):
    def fake(cfg, rng, chk):
        chk.add("probe", -1.0 if status is Status.FAIL else 1.0)
        chk.inconclusive = status is Status.INCONCLUSIVE

    monkeypatch.setitem(suites.SUITES, "cor-region", fake)
    got, out = run(["verify", "--suite", "cor-region"])
    assert got == code and status.value in out


def test_experiment_region():
    code, out = run(["experiment", "region", "--alpha", "2.5"])
    assert code == 0 and "koebe" in out and "no claim" in out
    assert run(["experiment", "region", "--alpha", "0.4"])[0] == 64


# exports


def test_distortion_curve(tmp_path):
    path = tmp_path / "d.csv"
    export.export_curve(suites.RunConfig(), "distortion", path, alpha=2.0)
    rows = read_csv(path)
    assert rows[0] == ["r", "lower", "upper", "sample_min", "sample_max"]
    assert len(rows) == 20
    p = cc.ConcaveParams(2.0)
    for row in rows[1:]:
        r, lo, hi, smin, smax = map(float, row)
        assert (lo, hi) == pytest.approx(fn.distortion_bounds(p, r), rel=1e-15)
        assert lo == pytest.approx((1 - r) / (1 + r) ** 3, rel=1e-14)
        assert hi == pytest.approx((1 + r) / (1 - r) ** 3, rel=1e-14)
        assert lo - 1e-9 * hi <= smin <= smax <= hi * (1 + 1e-9)


def test_disk_boundary_curve(tmp_path):
    path = tmp_path / "b.csv"
    code, _ = run(["export", "--curve", "disk-boundary", "--out", str(path), "--alpha", "2", "--z", "0.5,0"])
    assert code == 0
    rows = read_csv(path)
    assert rows[0] == ["k", "t", "re", "im"] and len(rows) == 257
    w = np.array([float(r[2]) + 1j * float(r[3]) for r in rows[1:]])
    center = 2 * 0.5 + 3 * (1 - 0.5) / (1 - 0.5)
    assert np.allclose(np.abs(w - center), 1.0, atol=1e-14)


def test_empty_grid_gives_header_only(tmp_path):
    path = tmp_path / "e.csv"
    code, _ = run(["export", "--curve", "means", "--out", str(path), "--radii", "0:0.9:0"])
    assert code == 0
    assert path.read_bytes() == b"r,p,M_p_g0,M_p_gpi\r\n"


def test_csv_number_format(tmp_path):
    path = tmp_path / "n.csv"
    export.export_curve(suites.RunConfig(), "norm-radial", path, alpha=1.5, radii=[0.3])
    row = read_csv(path)[1]
    assert all(float(v) == float("%.17g" % float(v)) for v in row)
    r, s0, spi, lo, hi = map(float, row)
    assert spi == pytest.approx(lo, abs=1e-9) and s0 == pytest.approx(hi, abs=1e-9)


def test_means_curve(tmp_path):
    path = tmp_path / "m.csv"
    export.export_curve(suites.RunConfig(), "means", path, alpha=2.0, radii=[0.5], p=2.0)
    r, p, m0, mpi = map(float, read_csv(path)[1])
    assert mpi == pytest.approx(0.25 / 0.75, abs=1e-12)
    assert m0 == pytest.approx(sum(n * n * 0.25**n for n in range(1, 200)), rel=1e-10)


def test_unwritable_path():
    code, _ = run(["export", "--curve", "means", "--out", "/nonexistent-dir/x.csv"])
    assert code == 64


def test_unknown_curve():
    with pytest.raises(ValueError):
        export.export_curve(suites.RunConfig(), "spiral", "/tmp/x.csv")
