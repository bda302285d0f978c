"""Convolution and coefficient characterizations of Co(alpha).

Nonvanishing of an infinite series cannot be decided from a truncation, so the
tests here work on ``|z| <= r_test`` with an explicit bound on the discarded
tail and answer ``inconclusive`` whenever that bound swamps the signal.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import pseries as ps
from .conclass import ConcaveFunction, from_kaplan
from .pseries import DEFAULT_ORDER, R_MAX, TruncatedSeries
from .report import PolarGrid, Status, VerificationReport

PI_TOL = 1e-9
COEFF_TOL = 1e-9


@dataclass(frozen=True)
class UnimodularParam:
    x: complex

    def __post_init__(self):
        object.__setattr__(self, "x", complex(self.x))
        if abs(abs(self.x) - 1) >= 1e-12:
            raise ValueError(f"|x| must equal 1, got {abs(self.x)!r}")


def unimodular_samples(n=8):
    """``n`` equispaced points of the circle, offset by ``pi/n`` so that ``-1`` is skipped."""
    t = np.pi / n + 2 * np.pi * np.arange(n) / n
    return [UnimodularParam(np.exp(1j * s)) for s in t]


def _x(x):
    return x.x if isinstance(x, UnimodularParam) else UnimodularParam(x).x


def _series(f):
    return f.f if isinstance(f, ConcaveFunction) else f


def conv_coeffs_A(params, f, x):
    """Coefficients ``A_0 = alpha - 1`` and, for ``n >= 1``,

    ``A_n = (alpha-n-1-n x)(n+1) a_{n+1} + [n+1+(n+alpha) x] n a_n``.

    The result has order ``N - 1`` for ``f`` of order ``N``.
    """
    U, V = conv_coeffs_A_split(params, f)
    return TruncatedSeries(U.coeffs + _x(x) * V.coeffs)


def conv_coeffs_A_split(params, f):
    """``(U, V)`` with ``A = U + x V``; lets many ``x`` share one evaluation."""
    a = _series(f).coeffs
    if abs(a[0]) > 1e-12 or abs(a[1] - 1) > 1e-12:
        raise ValueError("f must be normalized (a_0 = 0, a_1 = 1)")
    alpha = params.alpha
    n = np.arange(a.size - 1)
    # written through d_n = a_{n+1} - a_n: the raw form cancels terms of size n^2 |a_n|
    d = a[1:] - a[:-1]
    U = (alpha - 1) * (n + 1) * a[1:] - n * (n + 1) * d
    V = -n * ((n + 1) * d + (1 - alpha) * a[:-1])
    U[0], V[0] = alpha - 1, 0
    return TruncatedSeries(U), TruncatedSeries(V)


def tail_bound(growth, order, r):
    """``growth * sum_{n > order} n^2 r^n``."""
    if growth == 0 or r == 0:
        return 0.0
    n_terms = int(np.ceil(760 / -np.log(r))) + 64
    n = np.arange(order + 1, order + 1 + n_terms, dtype=float)
    return float(growth * np.sum(np.exp(2 * np.log(n) + n * np.log(r))))


def empirical_growth(series):
    """``max |c_n| / n^2`` over the upper half of the stored coefficients."""
    c = np.abs(series.coeffs)
    N = series.order
    if N < 1:
        return 0.0
    n = np.arange(max(1, N // 2), N + 1)
    return float(np.max(c[n] / n**2))


def _winding(values):
    d = np.angle(np.roll(values, -1) / values)
    return int(np.rint(np.sum(d) / (2 * np.pi)))


def nonvanish_test(series, r_test=0.5, growth_bound=None, n_radii=64, n_angles=256, n_circle=4096):
    """Decide ``sum c_n z^n != 0`` on ``|z| <= r_test`` from a truncation.

    The discarded tail is bounded by ``growth_bound * sum_{n>N} n^2 r_test^n``
    (``growth_bound`` defaults to the empirical ``max |c_n|/n^2`` on the top
    half of the coefficients).  Pass: grid minimum of the truncation above the
    tail and zero winding on the circle ``r_test``.  Fail: nonzero winding with
    the circle minimum above the tail (by Rouche the full series then vanishes
    inside), or a sampled value that is zero to rounding with a negligible
    tail.  Anything else is inconclusive.
    """
    if r_test > R_MAX:
        raise ps.EvaluationRadiusError(f"r_test = {r_test} exceeds r_max = {R_MAX}")
    g_emp = empirical_growth(series)
    g = g_emp if growth_bound is None else float(growth_bound)
    details = {"growth_bound": g, "empirical_growth": g_emp, "order": series.order}
    grid = PolarGrid.disk(r_test, n_radii, n_angles)
    n_samples = grid.size + 1 + n_circle
    if g_emp > g * (1 + 1e-9) + 1e-300:
        details["reason"] = "coefficients exceed the stated growth bound"
        return VerificationReport("nonvanish", Status.INCONCLUSIVE, 0.0, n_samples, details=[details])

    tail = tail_bound(g, series.order, r_test)
    z = grid.points()
    mods = np.abs(ps.evaluate(series, z, r_max=R_MAX))
    m0 = abs(series[0])
    idx = np.unravel_index(np.argmin(mods), z.shape)
    grid_min = float(min(mods[idx], m0))
    at = z[idx] if mods[idx] <= m0 else 0j

    t = 2 * np.pi * np.arange(n_circle) / n_circle
    circle_vals = ps.evaluate(series, r_test * np.exp(1j * t), r_max=R_MAX)
    circle_min = float(np.min(np.abs(circle_vals)))
    winding = _winding(circle_vals) if circle_min > 0 else None
    details.update(tail=tail, grid_min=grid_min, argmin=at, circle_min=circle_min, winding=winding)

    zero_tol = 1e-12 * max(1.0, float(np.max(np.abs(series.coeffs))))
    if min(grid_min, circle_min) <= zero_tol and tail <= zero_tol:
        # a sampled value is zero to rounding and the tail cannot move it away
        details["reason"] = "sampled zero in the closed disk"
        return VerificationReport("nonvanish", Status.FAIL, -zero_tol, n_samples, details=[details])
    if circle_min > tail and winding == 0 and grid_min > tail:
        return VerificationReport("nonvanish", Status.PASS, grid_min - tail, n_samples, details=[details])
    if circle_min > tail and winding:
        return VerificationReport("nonvanish", Status.FAIL, -(circle_min - tail), n_samples, details=[details])
    details["reason"] = "truncation tail too large to decide"
    return VerificationReport("nonvanish", Status.INCONCLUSIVE, grid_min - tail, n_samples, details=[details])


def pi_lambda_test(s, lam, grid=None, r_max=R_MAX):
    """Kaplan class test ``Re(z s'/s) < lam/2`` (``lam > 0``) sampled on a grid."""
    if lam <= 0:
        raise ValueError("only lam > 0 is supported")
    if abs(s[0] - 1) > 1e-12:
        raise ValueError("s must satisfy s(0) = 1")
    grid = grid or PolarGrid.default(r_max)
    z = grid.points()
    sv = ps.evaluate(s, z, r_max)
    small = np.abs(sv) < 1e-12
    if np.any(small):
        idx = np.unravel_index(np.argmax(small), z.shape)
        return VerificationReport(
            "pi-lambda", Status.FAIL, -np.inf, grid.size,
            details=[{"reason": "s vanishes on grid", "at": z[idx]}],
        )
    q = (z * ps.evaluate(ps.differentiate(s), z, r_max) / sv).real
    idx = np.unravel_index(np.argmax(q), z.shape)
    worst = float(q[idx])
    limit = lam / 2 + PI_TOL
    return VerificationReport(
        "pi-lambda",
        Status.PASS if worst < limit else Status.FAIL,
        limit - worst,
        grid.size,
        details=[{"max_re_zs_over_s": worst, "at": z[idx], "lambda": lam}],
    )


def s_conv_series(s, params, x):
    """``s * (z/(1-z)^2 + (1-alpha)/(x+1) / (1-z))`` as ``z s' + (1-alpha)/(x+1) s``."""
    x = _x(x)
    if abs(x + 1) <= 1e-8:
        raise ValueError("x = -1 is excluded")
    return ps.euler(s) + (1 - params.alpha) / (x + 1) * s


def s_conv_test(s, params, x, r_test=0.5):
    """Nonvanishing of ``s`` convolved with ``z/(1-z)^2 + (1-alpha)/(x+1) * 1/(1-z)``.

    The kernel identities give the series in closed form; it is cross-checked
    against explicit Hadamard products with both kernels.
    """
    x = _x(x)
    series = s_conv_series(s, params, x)
    n = np.arange(s.order + 1)
    koebe = TruncatedSeries(n.astype(float))
    geometric = TruncatedSeries(np.ones(s.order + 1))
    explicit = ps.hadamard(s, koebe) + (1 - params.alpha) / (x + 1) * ps.hadamard(s, geometric)
    scale = max(1.0, float(np.max(np.abs(series.coeffs))))
    mismatch = series.max_abs_diff(explicit)
    if mismatch > 1e-12 * scale:
        raise RuntimeError(f"kernel identity cross-check failed ({mismatch:.3g})")
    rep = nonvanish_test(series, r_test)
    rep.suite_id = "s-conv"
    rep.details[0]["kernel_mismatch"] = mismatch
    return rep


def b_coeffs(params, f):
    """``b_n = sum_k (-1)^(n-k) C(alpha+1, n-k) (k+1) a_{k+1}``, the coefficients of
    ``(1 - z)^(alpha+1) f'(z)`` computed from the Taylor coefficients of ``f``.
    """
    a = _series(f).coeffs
    N = a.size - 2
    ext = np.clongdouble
    binoms = np.array([ps.binomial_coeff(params.alpha + 1, j) * (-1) ** j for j in range(N + 1)], dtype=ext)
    d = np.arange(1, N + 2) * a[1:].astype(ext)
    b = np.array([np.dot(binoms[n::-1], d[: n + 1]) for n in range(N + 1)])
    return TruncatedSeries(b.astype(complex))


def coeff_inequality_check(params, f, n_max=16, member=None):
    """Check ``|b_n| <= (alpha-1)/n`` for ``1 <= n <= n_max``.

    The two low-order cases are reported separately:
    (i) ``|a_2 - (alpha+1)/2| <= (alpha-1)/2`` and
    (ii) ``|3 a_3 - 2(alpha+1) a_2 + alpha(alpha+1)/2| <= (alpha-1)/2``.
    ``member`` records whether the caller checked membership beforehand.
    """
    alpha = params.alpha
    b = b_coeffs(params, f).coeffs
    n = np.arange(1, n_max + 1)
    margins = (alpha - 1) / n - np.abs(b[1 : n_max + 1])
    a = _series(f).coeffs
    case_i = (alpha - 1) / 2 - abs(a[2] - (alpha + 1) / 2)
    case_ii = (alpha - 1) / 2 - abs(3 * a[3] - 2 * (alpha + 1) * a[2] + alpha * (alpha + 1) / 2)
    worst = float(min(margins.min(), case_i, case_ii))
    return VerificationReport(
        "coeff-inequality",
        Status.PASS if worst >= -COEFF_TOL else Status.FAIL,
        worst + COEFF_TOL,
        n_max,
        details=[{"margins": margins, "case_i": case_i, "case_ii": case_ii, "membership_checked": member}],
    )


def extremal_kaplan(params, k, theta=0.0, order=DEFAULT_ORDER):
    """Extremal function for ``|b_k|``: ``f' = (1 - e^{i theta} z^k)^((alpha-1)/k) / (1 - z)^(alpha+1)``.

    Built through the Kaplan signature ``s = (1 - e^{i theta} z^k)^((alpha-1)/k)``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    z_k = np.zeros(order + 1, dtype=complex)
    z_k[0] = 1
    if k <= order:
        z_k[k] = -np.exp(1j * theta)
    s = ps.pow_real(TruncatedSeries(z_k), (params.alpha - 1) / k)

    f = from_kaplan(params, s)
    f.provenance.update(kind="extremal-kaplan", k=k, theta=theta)
    return f


def a_functional(params, phi):
    """``-1/(2(alpha+1)) [phi_3 - (alpha+1)/4 phi_2^2 + (alpha+1) phi_2]``."""
    a = params.alpha
    p2, p3 = complex(phi.phi2), complex(phi.phi3)
    return -(p3 - (a + 1) / 4 * p2**2 + (a + 1) * p2) / (2 * (a + 1))


def a_functional_from_a3(f):
    """Same functional read off the third coefficient of ``f = Lambda_phi``."""
    a = f.alpha
    return 3 * (f.coeff(3) - (a + 1) * (a + 2) / 6) / (a**2 - 1)


class RegionVerdict(str, enum.Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


class UnsupportedRegionError(ValueError):
    pass


@dataclass(frozen=True)
class RegionQuadratic:
    """Image of the disk under ``h(z) = z + c z^2`` with ``|c| < 1/2``."""

    c: complex

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))
        if abs(self.c) >= 0.5:
            raise UnsupportedRegionError("|c| must be below 1/2 for a Jordan boundary curve")

    @classmethod
    def for_alpha(cls, alpha):
        return cls((alpha - 2) / (2 * (alpha + 1)))

    def h(self, z):
        return z + self.c * z**2


def _polyline_distance(p, curve):
    a = curve
    b = np.roll(curve, -1)
    ab = b - a
    t = np.clip(((p - a) * np.conj(ab)).real / np.maximum(np.abs(ab) ** 2, 1e-300), 0, 1)
    return float(np.min(np.abs(a + t * ab - p)))


def region_membership(region, p, n_samples=4096, tol=1e-6):
    """Locate ``p`` relative to the closed region bounded by ``t -> h(e^{it})``."""
    if not isinstance(region, RegionQuadratic):
        region = RegionQuadratic(region)
    t = 2 * np.pi * np.arange(n_samples) / n_samples
    curve = region.h(np.exp(1j * t))
    p = complex(p)
    if _polyline_distance(p, curve) < tol:
        return RegionVerdict.BOUNDARY
    return RegionVerdict.INSIDE if _winding(curve - p) == 1 else RegionVerdict.OUTSIDE
