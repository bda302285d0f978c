"""Verification suites, one per proven property of Co(alpha).

Each suite draws its randomness from a stream derived from ``(seed, suite_id)``,
so suites give identical reports whether run alone, together or concurrently.
"""

from __future__ import annotations

import time
import zlib
from dataclasses import asdict, dataclass

import numpy as np

from . import conclass as cc
from . import convchar as cv
from . import functionals as fn
from . import pseries as ps
from .report import Status, VerificationReport


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    alphas: tuple = (1.25, 1.5, 2.0)
    order: int = ps.DEFAULT_ORDER
    r_max: float = ps.R_MAX
    r_cap: float = 0.999
    n_radii: int = 64
    n_angles: int = 256
    n_quad: int = 4096
    r_test: float = 0.5
    n_random: int = 100
    seed: int = 0

    def validate(self):
        if not self.alphas:
            raise ConfigError("at least one alpha is required")
        for a in self.alphas:
            if not 1 < a <= 2:
                raise ConfigError(f"alpha {a} outside (1, 2]")
        if self.order < 16:
            raise ConfigError("series order must be at least 16")
        if not 0 < self.r_max < 1:
            raise ConfigError("r_max must lie in (0, 1)")
        if not self.r_max <= self.r_cap <= 0.999:
            raise ConfigError("r_cap must lie in [r_max, 0.999]")
        if not 0 < self.r_test <= min(0.5, self.r_max):
            raise ConfigError("r_test must lie in (0, 0.5]")
        if min(self.n_radii, self.n_angles, self.n_quad, self.n_random) < 1:
            raise ConfigError("grid sizes and sample counts must be positive")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        return self

    def to_dict(self):
        d = asdict(self)
        d["alphas"] = list(self.alphas)
        return d


def suite_rng(seed, suite_id):
    key = zlib.crc32(suite_id.encode("utf-8"))
    return np.random.default_rng(np.random.SeedSequence([int(seed), key]))


def random_disk_point(rng, radius):
    return complex(radius * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random()))


class _Checks:
    """Accumulates named slacks; a slack below zero is a failure."""

    def __init__(self):
        self.records = []
        self.inconclusive = False
        self.n = 0

    def add(self, check, slack, **extra):
        slack = float(slack)
        self.records.append({"check": check, "margin": slack, **extra})
        self.n += 1
        return slack >= 0

    def status(self):
        if any(r["margin"] < 0 for r in self.records):
            return Status.FAIL
        if self.inconclusive:
            return Status.INCONCLUSIVE
        return Status.PASS

    def margin(self):
        return min((r["margin"] for r in self.records), default=0.0)


SUITES = {}


def suite(name):
    def register(func):
        SUITES[name] = func
        return func

    return register


def _random_members(cfg, rng, n=None):
    out = []
    for i in range(cfg.n_random if n is None else n):
        params = cc.ConcaveParams(cfg.alphas[i % len(cfg.alphas)])
        out.append(cc.from_schwarz(params, cc.random_schwarz(rng), cfg.order))
    return out


def _window(value, lo, hi):
    return min(value - lo, hi - value)


@suite("thm1-disk")
def _thm1_disk(cfg, rng, chk):
    for i in range(cfg.n_random):
        params = cc.ConcaveParams(cfg.alphas[i % len(cfg.alphas)])
        omega = cc.random_schwarz(rng)
        f = cc.from_schwarz(params, omega, cfg.order)
        z = random_disk_point(rng, cfg.r_max)
        w = fn.scaled_functional(f, z, cfg.r_max)
        disk = fn.variability_disk(params, z)
        chk.add("containment", disk.margin(w) + 1e-9, alpha=params.alpha, z=z)
    for alpha in cfg.alphas:
        params = cc.ConcaveParams(alpha)
        for theta in 2 * np.pi * np.arange(16) / 16:
            g = cc.extremal_g_theta(params, theta, cfg.order)
            z = random_disk_point(rng, cfg.r_max)
            err = abs(abs(fn.recentered_functional(g, z, cfg.r_max)) - (alpha - 1))
            chk.add("boundary-attainment", 1e-9 - err, alpha=alpha, theta=theta)


@suite("thm2-fixed-a")
def _thm2_fixed_a(cfg, rng, chk):
    for i in range(cfg.n_random):
        params = cc.ConcaveParams(cfg.alphas[i % len(cfg.alphas)])
        alpha = params.alpha
        a = random_disk_point(rng, 1.0)
        f = cc.from_schwarz(params, cc.schwarz_with_fixed_origin(a, cc.random_schwarz(rng)), cfg.order)
        chk.add("f2-origin", 1e-10 - abs(2 * f.coeff(2) - (alpha + 1 + (alpha - 1) * a)))
        z = random_disk_point(rng, cfg.r_max)
        w = fn.scaled_functional(f, z, cfg.r_max)
        fixed = fn.variability_disk_fixed_a(params, z, a)
        full = fn.variability_disk(params, z)
        chk.add("containment", fixed.margin(w) + 1e-9, alpha=alpha, a=a, z=z)
        nest = full.radius - abs(fixed.center - full.center) - fixed.radius
        chk.add("nesting", nest + 1e-9)
    for alpha in cfg.alphas:
        params = cc.ConcaveParams(alpha)
        for theta in 2 * np.pi * np.arange(16) / 16:
            z = random_disk_point(rng, cfg.r_max)
            fixed = fn.variability_disk_fixed_a(params, z, np.exp(1j * theta))
            g = cc.extremal_g_theta(params, theta, cfg.order)
            chk.add("degenerate-radius", 1e-12 - fixed.radius)
            chk.add("degenerate-point", 1e-9 - abs(fixed.center - fn.scaled_functional(g, z, cfg.r_max)))


@suite("cor-norm-bounds")
def _cor_norm_bounds(cfg, rng, chk):
    def est(f, r_cap):
        return fn.norm_estimate(f, r_cap, cfg.n_radii, cfg.n_angles, r_max=cfg.r_max).lower

    for alpha in cfg.alphas:
        params = cc.ConcaveParams(alpha)
        v = est(cc.extremal_g_theta(params, np.pi, cfg.order), cfg.r_cap)
        chk.add("g_pi", _window(v, 3.996, 4.0001), alpha=alpha, estimate=v)
        v = est(cc.extremal_g_theta(params, 0.0, cfg.order), cfg.r_cap)
        chk.add("g_0", _window(v, 2 * alpha + 1.996, 2 * alpha + 2.0001), alpha=alpha, estimate=v)
    r = cfg.r_max
    slack = 2 * (1 - r)
    for f in _random_members(cfg, rng):
        v = est(f, r)
        chk.add("sandwich", _window(v, 2 + 2 * r - slack, 2 * f.alpha + 2), alpha=f.alpha, estimate=v)


@suite("cor-norm-fixed")
def _cor_norm_fixed(cfg, rng, chk):
    for i in range(cfg.n_random):
        params = cc.ConcaveParams(cfg.alphas[i % len(cfg.alphas)])
        alpha = params.alpha
        omega = cc.schwarz_with_fixed_origin(0.0, cc.random_schwarz(rng))
        f = cc.from_schwarz(params, omega, cfg.order)
        v = fn.norm_estimate(f, cfg.r_cap, cfg.n_radii, cfg.n_angles, r_max=cfg.r_max).lower
        chk.add("a=0", _window(v, 3 + alpha - 0.01, 2 + 2 * alpha + 0.0001), alpha=alpha, estimate=v)


@suite("thm1a-distortion")
def _thm1a_distortion(cfg, rng, chk):
    t = 2 * np.pi * np.arange(256) / 256
    for f in _random_members(cfg, rng):
        params = f.params
        worst = np.inf
        for r in (0.25, 0.5, 0.75):
            lo, hi = fn.distortion_bounds(params, r)
            mod = np.abs(f.fprime_at(r * np.exp(1j * t), cfg.r_max))
            tol = 1e-10 * hi
            worst = min(worst, float(np.min(mod - lo)) + tol, float(np.min(hi - mod)) + tol)
        chk.add("envelope", worst, alpha=params.alpha)
    for alpha in cfg.alphas:
        params = cc.ConcaveParams(alpha)
        g = cc.extremal_g_theta(params, 0.0, cfg.order)
        for r in (0.25, 0.5, 0.75):
            lo, hi = fn.distortion_bounds(params, r)
            up = abs(g.fprime_at(r, cfg.r_max))
            down = abs(g.fprime_at(-r, cfg.r_max))
            chk.add("g0-upper", 1e-10 - abs(up - hi), alpha=alpha, r=r)
            chk.add("g0-lower", 1e-10 - abs(down - lo), alpha=alpha, r=r)


@suite("hp-means")
def _hp_means(cfg, rng, chk):
    params = cc.ConcaveParams(2.0)
    g0 = cc.extremal_g_theta(params, 0.0, cfg.order)
    gpi = cc.extremal_g_theta(params, np.pi, cfg.order)
    radii = (0.9, 0.99, 0.999, 0.9999)
    for f, p, lo, hi, label in (
        (g0, 0.4, -0.1, 0.1, "g0-p0.4"),
        (g0, 0.7, 0.3, 0.5, "g0-p0.7"),
        (gpi, 0.5, -0.1, 0.1, "gpi-p0.5"),
    ):
        beta = fn.hardy_exponent_estimate(f, p, radii, cfg.n_quad, cfg.r_max)
        chk.add(label, _window(beta, lo, hi), beta=beta)
    r = 0.5
    m2 = fn.integral_means(gpi, 2.0, r, cfg.n_quad, cfg.r_max)
    chk.add("parseval", 1e-10 - abs(m2 - r**2 / (1 - r**2)), value=m2)


@suite("thm3-conv")
def _thm3_conv(cfg, rng, chk):
    xs = cv.unimodular_samples(8)
    for alpha in cfg.alphas:
        params = cc.ConcaveParams(alpha)
        gpi = cc.extremal_g_theta(params, np.pi, cfg.order)
        for x in xs:
            A = cv.conv_coeffs_A(params, gpi, x)
            n = np.arange(A.order + 1)
            closed = (alpha - 1) * (n + 1 + n * x.x)
            chk.add("gpi-closed-form", 1e-12 - float(np.max(np.abs(A.coeffs - closed))), alpha=alpha)
            rep = cv.nonvanish_test(A.truncate(min(A.order, 128)), cfg.r_test)
            chk.inconclusive |= rep.status is Status.INCONCLUSIVE
            chk.add("gpi-nonvanish", rep.margin if rep.passed else -1.0, alpha=alpha)
    for f in _random_members(cfg, rng):
        worst, status = np.inf, Status.PASS
        for x in xs:
            A = cv.conv_coeffs_A(f.params, f, x)
            rep = cv.nonvanish_test(A.truncate(min(A.order, 128)), cfg.r_test)
            if rep.status is not Status.PASS:
                status = rep.status
            worst = min(worst, rep.margin)
        chk.inconclusive |= status is Status.INCONCLUSIVE
        chk.add("random-nonvanish", worst if status is Status.PASS else min(worst, -1.0) if status is Status.FAIL else 0.0,
                alpha=f.alpha, status=status)
    # z + 5 z^2: a_2 lies outside the admissible disk
    params = cc.ConcaveParams(2.0)
    bad = cc.candidate(params, ps.TruncatedSeries.from_polynomial([0, 1, 5], cfg.order))
    member = cc.membership_test(bad, r_max=cfg.r_max)
    a_status = [cv.nonvanish_test(cv.conv_coeffs_A(params, bad, x), cfg.r_test).status for x in xs]
    chk.add("non-member-rejected", 1.0 if not member.passed else -1.0,
            membership=member.status, a_series=a_status)


def _non_members(order):
    z = ps.TruncatedSeries.variable(order)
    one = ps.TruncatedSeries.one(order)
    p2 = cc.ConcaveParams(2.0)
    p15 = cc.ConcaveParams(1.5)
    p125 = cc.ConcaveParams(1.25)
    return [
        ("z+5z^2", cc.candidate(p2, ps.TruncatedSeries.from_polynomial([0, 1, 5], order))),
        ("s=1+2z", cc.from_kaplan(p2, one + 2 * z)),
        ("s=1+1.2z", cc.from_kaplan(p2, one + 1.2 * z)),
        ("s=(1+1.5z)^(a-1)", cc.from_kaplan(p15, ps.pow_real(one + 1.5 * z, 0.5))),
        ("s=exp(z)", cc.from_kaplan(p125, ps.exp(z))),
    ]


@suite("thm4-kaplan")
def _thm4_kaplan(cfg, rng, chk):
    members = _random_members(cfg, rng)
    labelled = [("random", f, True) for f in members]
    labelled += [(name, f, False) for name, f in _non_members(cfg.order)]
    for name, f, expected in labelled:
        m = cc.membership_test(f, r_max=cfg.r_max).passed
        p = cv.pi_lambda_test(cc.kaplan_signature(f), f.alpha - 1, r_max=cfg.r_max).passed
        chk.add("equivalence", 1.0 if (m == p == expected) else -1.0, case=name, membership=m, pi_lambda=p)
    for f in members[:10]:
        g = cc.from_schwarz(f.params, cc.random_schwarz(rng), 128)
        s = cc.kaplan_signature(g)
        back = cc.from_kaplan(g.params, s)
        err = max(back.f.max_abs_diff(g.f), back.fprime.max_abs_diff(g.fprime),
                  cc.kaplan_signature(back).max_abs_diff(s))
        chk.add("round-trip-N128", 1e-10 - err, error=err)


@suite("thm5-coeff")
def _thm5_coeff(cfg, rng, chk):
    cases = [("random", f) for f in _random_members(cfg, rng)]
    for alpha in cfg.alphas:
        params = cc.ConcaveParams(alpha)
        cases += [("g_theta", cc.extremal_g_theta(params, th, cfg.order)) for th in 2 * np.pi * np.arange(16) / 16]
    for name, f in cases:
        rep = cv.coeff_inequality_check(f.params, f, 16, member=True)
        chk.add("b_n-bound", rep.margin if rep.passed else min(rep.margin, -1e-300), case=name, alpha=f.alpha)
        b = cv.b_coeffs(f.params, f)
        s = cc.kaplan_signature(f)
        diff = float(np.max(np.abs(b.coeffs[:65] - s.coeffs[:65])))
        # both routes round inputs of size |n a_n|, so the tolerance scales with them
        scale = max(1.0, float(np.max(np.abs(f.fprime.coeffs[:65]))))
        chk.add("two-routes", 1e-12 * scale - diff, case=name)


@suite("adde2-extremal")
def _adde2_extremal(cfg, rng, chk):
    for alpha in cfg.alphas:
        params = cc.ConcaveParams(alpha)
        for k in (1, 2, 3):
            for theta in (0.0, 1.0, np.pi / 2):
                f = cv.extremal_kaplan(params, k, theta, cfg.order)
                b = cv.b_coeffs(params, f).coeffs
                chk.add("equality", 1e-10 - abs(abs(b[k]) - (alpha - 1) / k), alpha=alpha, k=k, theta=theta)
                chk.add("lower-vanish", 1e-10 - (float(np.max(np.abs(b[1:k]))) if k > 1 else 0.0), k=k)
                chk.add("member", cc.membership_test(f, r_max=cfg.r_max).margin, k=k)
    params = cc.ConcaveParams(2.0)
    for i in range(cfg.n_random):
        f = cc.from_schwarz(params, cc.random_schwarz(rng), cfg.order)
        v = abs(1 - 2 * f.coeff(2) + f.coeff(3))
        chk.add("co2-bound", 1 / 6 + 1e-9 - v)
    f = cv.extremal_kaplan(params, 2, 0.0, cfg.order)
    v = abs(1 - 2 * f.coeff(2) + f.coeff(3))
    chk.add("co2-equality", 1e-10 - abs(v - 1 / 6), value=v)


@suite("thm6-lambda")
def _thm6_lambda(cfg, rng, chk):
    fixtures = cc.starlike_fixtures(cfg.order)
    by_name = {phi.name: phi for phi in fixtures}
    for phi in fixtures:
        chk.add("starlike-fixture", phi.check_starlike(), fixture=phi.name)
    for alpha in cfg.alphas:
        params = cc.ConcaveParams(alpha)
        lk = cc.lambda_transform(params, by_name["koebe"])
        chk.add("koebe->g_pi", 1e-10 - lk.f.max_abs_diff(cc.extremal_g_theta(params, np.pi, cfg.order).f))
        li = cc.lambda_transform(params, by_name["identity"])
        chk.add("identity->center", 1e-10 - li.f.max_abs_diff(cc.center_function(params, cfg.order).f))
        for phi in fixtures:
            f = cc.lambda_transform(params, phi)
            back = cc.starlike_from_concave(f)
            chk.add("inverse", 1e-10 - back.max_abs_diff(phi.series), alpha=alpha, fixture=phi.name)
            chk.add("member", cc.membership_test(f, r_max=cfg.r_max).margin, alpha=alpha, fixture=phi.name)


@suite("cor-region")
def _cor_region(cfg, rng, chk):
    fixtures = cc.starlike_fixtures(cfg.order)
    for alpha in cfg.alphas:
        params = cc.ConcaveParams(alpha)
        region = cv.RegionQuadratic.for_alpha(alpha)
        for phi in fixtures:
            A = cv.a_functional(params, phi)
            verdict = cv.region_membership(region, A)
            chk.add("in-closure", 1.0 if verdict is not cv.RegionVerdict.OUTSIDE else -1.0,
                    alpha=alpha, fixture=phi.name, value=A, verdict=verdict)
            via_a3 = cv.a_functional_from_a3(cc.lambda_transform(params, phi))
            chk.add("a3-consistency", 1e-10 - abs(via_a3 - A), alpha=alpha, fixture=phi.name)
    koebe = next(phi for phi in fixtures if phi.name == "koebe")
    p2 = cc.ConcaveParams(2.0)
    A = cv.a_functional(p2, koebe)
    verdict = cv.region_membership(cv.RegionQuadratic.for_alpha(2.0), A)
    chk.add("koebe-boundary", 1e-12 - abs(A + 1) if verdict is cv.RegionVerdict.BOUNDARY else -1.0, verdict=verdict)


SUITE_IDS = tuple(SUITES)


def run_suite(config, suite_id):
    if suite_id not in SUITES:
        raise ConfigError(f"unknown suite {suite_id!r}; expected one of {', '.join(SUITE_IDS)}")
    config.validate()
    rng = suite_rng(config.seed, suite_id)
    chk = _Checks()
    start = time.perf_counter()
    SUITES[suite_id](config, rng, chk)
    elapsed = int(round((time.perf_counter() - start) * 1000))
    status = chk.status()
    margin = chk.margin()
    if status is Status.PASS:
        margin = max(margin, 0.0)
    return VerificationReport(suite_id, status, margin, chk.n, config.seed, chk.records, elapsed)


def run_all(config, suite_ids=None):
    return [run_suite(config, sid) for sid in (suite_ids or SUITE_IDS)]


def exit_code(reports):
    statuses = {r.status for r in reports}
    if Status.FAIL in statuses:
        return 1
    if Status.INCONCLUSIVE in statuses:
        return 2
    return 0
