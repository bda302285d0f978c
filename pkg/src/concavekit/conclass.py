"""Members of the concave class Co(alpha) and the objects that generate them.

A function ``f`` with ``f(0) = f'(0) - 1 = 0`` belongs to Co(alpha) exactly when

    P_f(z) = 2/(alpha-1) * [ (alpha+1)/2 * (1+z)/(1-z) - 1 - z f''(z)/f'(z) ]

has positive real part on the unit disk.  Writing ``P_f = (1 - z w)/(1 + z w)``
with a Schwarz function ``w`` (an analytic self-map of the closed disk) turns this
into a construction: every ``w`` yields a member and every member arises so.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from . import pseries as ps
from .pseries import DEFAULT_ORDER, R_MAX, EvaluationRadiusError, TruncatedSeries
from .report import PolarGrid, Status, VerificationReport

MEMBERSHIP_TOL = 1e-9
PI_SWITCH = 1e-8


class NormalizationError(ValueError):
    pass


class InternalConsistencyError(RuntimeError):
    pass


@dataclass(frozen=True)
class ConcaveParams:
    """Opening-angle parameter ``alpha`` in (1, 2].

    ``experimental=True`` lifts the range check (any ``alpha > 0``, ``alpha != 1``)
    for probing formulas outside the proven range; nothing is claimed there.
    """

    alpha: float
    experimental: bool = False

    def __post_init__(self):
        a = float(self.alpha)
        object.__setattr__(self, "alpha", a)
        if self.experimental:
            if not (a > 0 and a != 1):
                raise ValueError(f"alpha must be positive and != 1, got {a}")
        elif not (1 < a <= 2):
            raise ValueError(f"alpha must lie in (1, 2], got {a}")


# Schwarz functions


class SchwarzFunction:
    """Analytic ``w`` on the disk with ``sup |w| <= 1``.

    Subclasses provide pointwise evaluation (vectorized, valid on the whole
    closed disk) and a Taylor series at any order.
    """

    kind = "abstract"

    def __call__(self, z):
        raise NotImplementedError

    def series(self, order):
        raise NotImplementedError

    @property
    def origin(self):
        return complex(self(np.zeros(1))[0])

    def describe(self):
        return {"kind": self.kind}


@dataclass(frozen=True)
class ConstantSchwarz(SchwarzFunction):
    value: complex

    kind = "constant"

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))
        if abs(self.value) > 1 + 1e-12:
            raise ValueError(f"constant Schwarz function needs |value| <= 1, got {abs(self.value)}")

    @classmethod
    def unimodular(cls, theta):
        return cls(np.exp(1j * theta))

    def __call__(self, z):
        return np.full(np.shape(z), self.value, dtype=complex)

    def series(self, order):
        return TruncatedSeries.constant(self.value, order)

    def describe(self):
        return {"kind": self.kind, "value": self.value}


@dataclass(frozen=True)
class MonomialSchwarz(SchwarzFunction):
    """``w(z) = exp(i theta) z^(k-1)``."""

    theta: float
    k: int = 1

    kind = "monomial"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("monomial Schwarz function needs k >= 1")

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return np.exp(1j * self.theta) * z ** (self.k - 1)

    def series(self, order):
        c = np.zeros(order + 1, dtype=complex)
        if self.k - 1 <= order:
            c[self.k - 1] = np.exp(1j * self.theta)
        return TruncatedSeries(c)

    def describe(self):
        return {"kind": self.kind, "theta": self.theta, "k": self.k}


@dataclass(frozen=True)
class BlaschkeSchwarz(SchwarzFunction):
    """``rho * exp(i theta0) * prod (z + a_j) / (1 + conj(a_j) z)`` with ``|a_j| < 1``."""

    zeros: tuple = ()
    theta0: float = 0.0
    rho: float = 1.0

    kind = "blaschke"

    def __post_init__(self):
        object.__setattr__(self, "zeros", tuple(complex(a) for a in self.zeros))
        if any(abs(a) >= 1 for a in self.zeros):
            raise ValueError("Blaschke factors need |a| < 1")
        if not (0 <= self.rho <= 1):
            raise ValueError("damping factor must lie in [0, 1]")

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, self.rho * np.exp(1j * self.theta0), dtype=complex)
        for a in self.zeros:
            out = out * (z + a) / (1 + np.conj(a) * z)
        return out

    def series(self, order):
        out = TruncatedSeries.constant(self.rho * np.exp(1j * self.theta0), order)
        n = np.arange(1, order + 1)
        for a in self.zeros:
            c = np.empty(order + 1, dtype=complex)
            c[0] = a
            c[1:] = (-np.conj(a)) ** (n - 1) * (1 - abs(a) ** 2)
            out = ps.mul(out, TruncatedSeries(c))
        return out

    def describe(self):
        return {"kind": self.kind, "zeros": list(self.zeros), "theta0": self.theta0, "rho": self.rho}


@dataclass(frozen=True)
class SeriesSchwarz(SchwarzFunction):
    """Polynomial Schwarz function given by coefficients.

    The bound ``|w| <= 1`` is checked by sampling the circle ``r = 0.999``
    at ``n_check`` points; this is a sampling check, not a proof.
    """

    coeffs: tuple
    n_check: int = 4096

    kind = "series"

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))
        t = 2 * np.pi * np.arange(self.n_check) / self.n_check
        peak = np.max(np.abs(self(0.999 * np.exp(1j * t))))
        if peak > 1 + 1e-12:
            raise ValueError(f"series is not bounded by 1 on the disk (sampled max {peak:.6g})")

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return np.polyval(np.array(self.coeffs[::-1]), z)

    def series(self, order):
        return TruncatedSeries.from_polynomial(self.coeffs, order)

    def describe(self):
        return {"kind": self.kind, "coeffs": list(self.coeffs)}


@dataclass(frozen=True)
class FixedOriginSchwarz(SchwarzFunction):
    """``w(z) = (a + z phi(z)) / (1 + conj(a) z phi(z))``, so that ``w(0) = a``."""

    a: complex
    inner: SchwarzFunction

    kind = "fixed-origin"

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        if abs(self.a) > 1 + 1e-12:
            raise ValueError(f"origin value must lie in the closed disk, got |a| = {abs(self.a)}")

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        u = z * self.inner(z)
        return (self.a + u) / (1 + np.conj(self.a) * u)

    def series(self, order):
        u = self.inner.series(order).shift_up()
        return (self.a + u) / (1 + np.conj(self.a) * u)

    def describe(self):
        return {"kind": self.kind, "a": self.a, "inner": self.inner.describe()}


def schwarz_with_fixed_origin(a, phi):
    return FixedOriginSchwarz(a, phi)


def random_schwarz(rng, max_factors=3, max_zero_modulus=0.8, damping=(0.3, 1.0)):
    """Random Blaschke-type Schwarz function.

    Draws ``m <= max_factors`` zeros uniformly in the disk of radius
    ``max_zero_modulus``, a random rotation, and (half of the time) a damping
    factor from ``damping``; otherwise the product is unimodular on the circle.
    """
    m = int(rng.integers(0, max_factors + 1))
    radii = max_zero_modulus * np.sqrt(rng.random(m))
    angles = rng.uniform(0, 2 * np.pi, m)
    zeros = tuple(radii * np.exp(1j * angles))
    theta0 = float(rng.uniform(0, 2 * np.pi))
    rho = 1.0 if rng.random() < 0.5 else float(rng.uniform(*damping))
    return BlaschkeSchwarz(zeros, theta0, rho)


# concave functions


@dataclass(frozen=True, eq=False)
class ConcaveFunction:
    """A normalized function ``f = z + a_2 z^2 + ...`` with its derivative series.

    Functions built by :func:`from_schwarz` and relatives are members of
    Co(alpha); :func:`candidate` wraps arbitrary normalized series for testing.
    When the construction supplies closed forms, evaluation beyond the series
    radius guard falls back to them.
    """

    params: ConcaveParams
    f: TruncatedSeries
    fprime: TruncatedSeries
    provenance: dict = field(default_factory=dict)
    closed_f: Optional[Callable] = None
    closed_fprime: Optional[Callable] = None
    closed_T: Optional[Callable] = None

    def __post_init__(self):
        if abs(self.f[0]) > 1e-12 or (self.f.order >= 1 and abs(self.f[1] - 1) > 1e-12):
            raise NormalizationError("f must satisfy f(0) = 0 and f'(0) = 1")

    @property
    def alpha(self):
        return self.params.alpha

    @property
    def order(self):
        return self.f.order

    def coeff(self, n):
        return complex(self.f[n])

    @cached_property
    def fsecond(self):
        return ps.differentiate(self.fprime)

    def a2_in_disk(self, tol=1e-9):
        """Second coefficient lies in the disk centered (alpha+1)/2 of radius (alpha-1)/2."""
        a = self.alpha
        return abs(self.coeff(2) - (a + 1) / 2) <= (a - 1) / 2 + tol

    def _pick(self, series_fn, closed, z, r_max):
        z = np.asarray(z, dtype=complex)
        if ps.within_radius(z, r_max):
            return series_fn(z)
        if closed is None:
            raise EvaluationRadiusError(
                f"|z| = {np.max(np.abs(z)):.6g} > r_max = {r_max} and no closed form is attached"
            )
        return closed(z)

    def f_at(self, z, r_max=R_MAX):
        return self._pick(lambda w: ps.evaluate(self.f, w, r_max), self.closed_f, z, r_max)

    def fprime_at(self, z, r_max=R_MAX):
        return self._pick(lambda w: ps.evaluate(self.fprime, w, r_max), self.closed_fprime, z, r_max)

    def T_at(self, z, r_max=R_MAX):
        """Pre-Schwarzian ``f''/f'`` at ``z``."""

        def from_series(w):
            return ps.evaluate(self.fsecond, w, r_max) / ps.evaluate(self.fprime, w, r_max)

        return self._pick(from_series, self.closed_T, z, r_max)


def _log1p(x):
    x = np.asarray(x, dtype=complex)
    small = np.abs(x) < 1e-4
    out = np.log(1 + np.where(small, 0, x))
    xs = np.where(small, x, 0)
    return np.where(small, xs - xs**2 / 2 + xs**3 / 3 - xs**4 / 4, out)


def _expm1(y):
    y = np.asarray(y, dtype=complex)
    small = np.abs(y) < 1e-4
    out = np.exp(np.where(small, 0, y)) - 1
    ys = np.where(small, y, 0)
    return np.where(small, ys + ys**2 / 2 + ys**3 / 6 + ys**4 / 24, out)


def _constant_omega_closed_forms(alpha, c):
    """Closed forms of the member generated by the constant Schwarz function ``c``.

    ``f' = (1 + c z)^(alpha-1) / (1 - z)^(alpha+1)`` and
    ``f = [((1 + c z)/(1 - z))^alpha - 1] / (alpha (1 + c))``, written through
    ``log1p``/``expm1`` of ``(1 + c) z/(1 - z)`` so that ``c -> -1`` is stable.
    """
    eps = 1 + c

    def f(z):
        z = np.asarray(z, dtype=complex)
        w = z / (1 - z)
        if abs(eps) < PI_SWITCH:
            return w
        return _expm1(alpha * _log1p(eps * w)) / (alpha * eps)

    def fprime(z):
        z = np.asarray(z, dtype=complex)
        return np.exp((alpha - 1) * np.log(1 + c * z) - (alpha + 1) * np.log(1 - z))

    def T(z):
        z = np.asarray(z, dtype=complex)
        return (alpha - 1) * c / (1 + c * z) + (alpha + 1) / (1 - z)

    return f, fprime, T


def from_schwarz(params, omega, order=DEFAULT_ORDER):
    """Member of Co(alpha) whose ``P_f`` equals ``(1 - z w)/(1 + z w)``."""
    alpha = params.alpha
    m = order + 1
    z = TruncatedSeries.variable(m)
    zw = omega.series(m).shift_up()
    P = (1 - zw) / (1 + zw)
    zT = (alpha + 1) / 2 * ((1 + z) / (1 - z)) - 1 - (alpha - 1) / 2 * P
    if abs(zT[0]) > 1e-12:
        raise InternalConsistencyError(f"z f''/f' has nonzero constant term {zT[0]!r}")
    T = zT.shift_down()
    fprime = ps.exp(ps.integrate_from_zero(T))
    f = ps.integrate_from_zero(fprime)

    def closed_T(w):
        w = np.asarray(w, dtype=complex)
        om = omega(w)
        return ((alpha - 1) * om + (alpha + 1) + 2 * w * om) / ((1 - w) * (1 + w * om))

    closed_f = closed_fp = None
    if isinstance(omega, ConstantSchwarz):
        closed_f, closed_fp, closed_T = _constant_omega_closed_forms(alpha, omega.value)
    return ConcaveFunction(
        params,
        f.truncate(order),
        fprime.truncate(order),
        provenance={"kind": "schwarz", "omega": omega.describe()},
        closed_f=closed_f,
        closed_fprime=closed_fp,
        closed_T=closed_T,
    )


def extremal_g_theta(params, theta, order=DEFAULT_ORDER):
    """Extremal function ``g_theta``; ``theta = pi`` gives ``z/(1 - z)``.

    The series is built from ``g' = (1 + e^{i theta} z)^(alpha-1) (1 - z)^(-alpha-1)``.
    """
    alpha = params.alpha
    theta = float(theta) % (2 * np.pi)
    c = np.exp(1j * theta)
    if abs(1 + c) < PI_SWITCH:
        c = -1.0 + 0j
        fprime = TruncatedSeries(np.arange(1.0, order + 2))
        f = TruncatedSeries(np.where(np.arange(order + 1) >= 1, 1.0, 0.0))
    else:
        fprime = ps.mul(ps.binomial_series(alpha - 1, order, c), ps.binomial_series(-(alpha + 1), order, -1.0))
        f = ps.integrate_from_zero(fprime)
    closed_f, closed_fp, closed_T = _constant_omega_closed_forms(alpha, c)
    return ConcaveFunction(
        params,
        f,
        fprime,
        provenance={"kind": "g_theta", "theta": theta},
        closed_f=closed_f,
        closed_fprime=closed_fp,
        closed_T=closed_T,
    )


def center_function(params, order=DEFAULT_ORDER):
    """The member with ``w = 0``: ``f = ((1 - z)^(-alpha) - 1)/alpha``."""
    return from_schwarz(params, ConstantSchwarz(0.0), order)


def candidate(params, f):
    """Wrap an arbitrary normalized series (member or not) for testing."""
    return ConcaveFunction(params, f, ps.differentiate(f), provenance={"kind": "candidate"})


def _p_values(alpha, z, T):
    return 2 / (alpha - 1) * ((alpha + 1) / 2 * (1 + z) / (1 - z) - 1 - z * T)


def membership_test(f, grid=None, tol=MEMBERSHIP_TOL, r_max=R_MAX):
    """Sample ``Re P_f`` on a polar grid; pass iff its minimum exceeds ``-tol``."""
    grid = grid or PolarGrid.default(r_max)
    z = grid.points()
    fp = f.fprime_at(z, r_max)
    small = np.abs(fp) <= 1e-12
    if np.any(small):
        idx = np.unravel_index(np.argmax(small), z.shape)
        return VerificationReport(
            "membership",
            Status.FAIL,
            -np.inf,
            grid.size,
            details=[{"reason": "f' vanishes on grid", "at": z[idx]}],
        )
    re_p = _p_values(f.alpha, z, f.T_at(z, r_max)).real
    idx = np.unravel_index(np.argmin(re_p), z.shape)
    worst = float(re_p[idx])
    return VerificationReport(
        "membership",
        Status.PASS if worst > -tol else Status.FAIL,
        worst + tol,
        grid.size,
        details=[{"min_re_P": worst, "at": z[idx]}],
    )


def kaplan_signature(f):
    """``s = (1 - z)^(alpha+1) f'``; ``s(0) = 1``."""
    return ps.mul(ps.binomial_series(f.alpha + 1, f.fprime.order, -1.0), f.fprime)


def from_kaplan(params, s):
    """``f = integral_0^z s(t) (1 - t)^(-alpha-1) dt``.

    The caller is responsible for ``s`` lying in the Kaplan class
    Pi_(alpha-1); only the normalization ``s(0) = 1`` is enforced.
    """
    if abs(s[0] - 1) > 1e-12:
        raise NormalizationError(f"Kaplan signature must have s(0) = 1, got {s[0]!r}")
    fprime = ps.mul(s, ps.binomial_series(-(params.alpha + 1), s.order, -1.0))
    return ConcaveFunction(
        params, ps.integrate_from_zero(fprime), fprime, provenance={"kind": "kaplan"}
    )


# starlike fixtures and the Lambda transform


@dataclass(frozen=True, eq=False)
class StarlikeFixture:
    name: str
    series: TruncatedSeries
    phi2: complex
    phi3: complex
    func: Callable
    deriv: Callable

    def check_starlike(self, r_max=0.95, n_radii=19, n_angles=256):
        """Minimum of ``Re(z phi'/phi)`` over ``r in (0, r_max]``; positive for S*."""
        z = PolarGrid(tuple(np.linspace(r_max / n_radii, r_max, n_radii)), n_angles).points()
        return float(np.min((z * self.deriv(z) / self.func(z)).real))


def starlike_fixtures(order=DEFAULT_ORDER):
    """Classical starlike functions ``z``, ``z/(1-z)``, ``z/(1-z)^2``, ``z/(1-z^2)``.

    Series are stored at ``order + 1`` so that transforms come out at ``order``.
    """
    m = order + 1
    n = np.arange(m + 1)
    odd = np.where(n % 2 == 1, 1.0, 0.0)
    return [
        StarlikeFixture("identity", TruncatedSeries.variable(m), 0, 0,
                        lambda z: z, lambda z: np.ones_like(z)),
        StarlikeFixture("half-plane", TruncatedSeries(np.where(n >= 1, 1.0, 0.0)), 1, 1,
                        lambda z: z / (1 - z), lambda z: 1 / (1 - z) ** 2),
        StarlikeFixture("koebe", TruncatedSeries(n.astype(float)), 2, 3,
                        lambda z: z / (1 - z) ** 2, lambda z: (1 + z) / (1 - z) ** 3),
        StarlikeFixture("odd-strip", TruncatedSeries(odd), 0, 1,
                        lambda z: z / (1 - z**2), lambda z: (1 + z**2) / (1 - z**2) ** 2),
    ]


def lambda_transform(params, phi):
    """``f(z) = integral_0^z (1 - t)^(-alpha-1) (t/phi(t))^((alpha-1)/2) dt``."""
    s = phi.series
    if abs(s[0]) > 1e-12 or abs(s[1] - 1) > 1e-12:
        raise NormalizationError(f"starlike fixture {phi.name!r} is not normalized")
    alpha = params.alpha
    q = s.shift_down()
    kernel = ps.pow_real(q, -(alpha - 1) / 2)
    fprime = ps.mul(ps.binomial_series(-(alpha + 1), q.order, -1.0), kernel)
    return ConcaveFunction(
        params,
        ps.integrate_from_zero(fprime),
        fprime,
        provenance={"kind": "lambda", "phi": phi.name},
    )


def starlike_from_concave(f):
    """Inverse of the Lambda transform: ``phi = z s^(2/(1-alpha))``, one order higher."""
    q = ps.pow_real(kaplan_signature(f), 2 / (1 - f.alpha))
    return TruncatedSeries(np.concatenate(([0.0], q.coeffs)))
