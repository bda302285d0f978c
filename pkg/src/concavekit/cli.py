"""Command-line entry point: ``concave-kit verify | export | experiment``.

Exit codes: 0 all suites pass, 1 some suite fails, 2 some suite is
inconclusive (and none fails), 64 bad configuration or usage.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import conclass as cc
from . import convchar as cv
from . import export
from . import suites
from .report import jsonable

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_CONFIG = 0, 1, 2, 64
SEED_ENV = "CONCAVE_KIT_SEED"
REPORT_FORMAT = "concavekit.report/1"


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which would read as "inconclusive"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _float_list(text):
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _complex_pair(text):
    try:
        re_part, im_part = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}")
    return complex(re_part, im_part)


def _radii(text):
    """``start:stop:count`` (inclusive, like linspace); count 0 gives an empty grid."""
    try:
        start, stop, count = text.split(":")
        start, stop, count = float(start), float(stop), int(count)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected start:stop:count, got {text!r}")
    if count < 0:
        raise argparse.ArgumentTypeError("count must be nonnegative")
    if count == 1:
        return (start,)
    return tuple(start + (stop - start) * k / (count - 1) for k in range(count))


def build_parser():
    parser = _Parser(prog="concave-kit", description="Numerical checks for concave univalent functions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run verification suites")
    which = v.add_mutually_exclusive_group()
    which.add_argument("--suite", action="append", choices=suites.SUITE_IDS, help="suite id (repeatable)")
    which.add_argument("--all", action="store_true", help="run every suite (the default)")
    v.add_argument("--alpha", type=_float_list, help="comma-separated alphas in (1, 2]")
    v.add_argument("--order", type=int, help="series order N")
    v.add_argument("--seed", type=int, help=f"RNG seed (falls back to ${SEED_ENV}, then 0)")
    v.add_argument("--n-random", type=int, help="random samples per suite")
    v.add_argument("--json", metavar="PATH", help="write the JSON report here ('-' for stdout)")
    v.add_argument("--timings", action="store_true", help="include wall_time_ms (makes output non-reproducible)")

    e = sub.add_parser("export", help="write a curve as CSV")
    e.add_argument("--curve", required=True, choices=export.CURVES)
    e.add_argument("--out", required=True, metavar="PATH")
    e.add_argument("--alpha", type=float, default=2.0)
    e.add_argument("--z", type=_complex_pair, default=complex(0.5, 0.0), help="point for disk-boundary, as RE,IM")
    e.add_argument("--radii", type=_radii, help="radius grid start:stop:count")
    e.add_argument("--p", type=float, default=0.4, help="exponent for the means curve")
    e.add_argument("--order", type=int)

    x = sub.add_parser("experiment", help="opt-in probes outside the proven parameter range")
    xsub = x.add_subparsers(dest="experiment", required=True, parser_class=_Parser)
    reg = xsub.add_parser("region", help="locate the A-functional of the starlike fixtures for any alpha")
    reg.add_argument("--alpha", type=float, required=True)
    reg.add_argument("--order", type=int, default=64)
    return parser


def _seed(explicit):
    if explicit is not None:
        return explicit
    env = os.environ.get(SEED_ENV)
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise suites.ConfigError(f"{SEED_ENV}={env!r} is not an integer")


def _config(args):
    cfg = suites.RunConfig(seed=_seed(getattr(args, "seed", None)))
    if getattr(args, "alpha", None) is not None and isinstance(args.alpha, tuple):
        cfg.alphas = args.alpha
    if getattr(args, "order", None) is not None:
        cfg.order = args.order
    if getattr(args, "n_random", None) is not None:
        cfg.n_random = args.n_random
    return cfg.validate()


def report_document(cfg, reports, include_timing=False):
    return {
        "format": REPORT_FORMAT,
        "config": cfg.to_dict(),
        "status": _overall(reports),
        "exit_code": suites.exit_code(reports),
        "reports": [r.to_dict(include_timing) for r in reports],
    }


def _overall(reports):
    return {0: "pass", 1: "fail", 2: "inconclusive"}[suites.exit_code(reports)]


def cmd_verify(args, out):
    cfg = _config(args)
    reports = suites.run_all(cfg, args.suite)
    for r in reports:
        print(f"{r.suite_id:<18} {r.status.value:<12} margin={r.margin:+.3e} n={r.n_samples}", file=out)
    code = suites.exit_code(reports)
    print(f"overall: {_overall(reports)}", file=out)
    if args.json:
        text = json.dumps(report_document(cfg, reports, args.timings), indent=2, sort_keys=True) + "\n"
        if args.json == "-":
            out.write(text)
        else:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(text)
    return code


def cmd_export(args, out):
    cfg = _config(args)
    try:
        n = export.export_curve(cfg, args.curve, args.out, alpha=args.alpha, z=args.z, radii=args.radii, p=args.p)
    except OSError as exc:
        print(f"cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"wrote {n} rows to {args.out}", file=out)
    return EXIT_OK


def cmd_experiment(args, out):
    params = cc.ConcaveParams(args.alpha, experimental=True)
    region = cv.RegionQuadratic.for_alpha(args.alpha)
    print(f"alpha={args.alpha} (experimental; no claim is made outside (1, 2])", file=out)
    rows = []
    for phi in cc.starlike_fixtures(args.order):
        A = cv.a_functional(params, phi)
        verdict = cv.region_membership(region, A)
        rows.append({"fixture": phi.name, "A": A, "verdict": verdict})
        print(f"  {phi.name:<11} A={A.real:+.6f}{A.imag:+.6f}i  {verdict.value}", file=out)
    print(json.dumps(jsonable(rows), sort_keys=True), file=out)
    return EXIT_OK


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"verify": cmd_verify, "export": cmd_export, "experiment": cmd_experiment}[args.command]
    try:
        return handler(args, out)
    except (suites.ConfigError, cv.UnsupportedRegionError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
