"""The weighted pre-Schwarzian ``(1 - |z|^2) f''(z)/f'(z)`` over Co(alpha).

Covers the exact disks of variability (unconditional and with ``f''(0)`` fixed),
lower estimates of the pre-Schwarzian norm by grid search, the distortion
envelope for ``|f'|`` and Hardy-space integral means.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pseries import R_MAX, within_radius
from .report import PolarGrid

GOLDEN = (math.sqrt(5) - 1) / 2


class VanishingDerivativeError(ArithmeticError):
    pass


class InsufficientDataError(ValueError):
    pass


@dataclass(frozen=True)
class DiskRegion:
    center: complex
    radius: float

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("disk radius must be nonnegative")

    def margin(self, w):
        """``radius - |w - center|``; nonnegative inside the disk."""
        return self.radius - np.abs(np.asarray(w) - self.center)

    def contains(self, w, tol=1e-9):
        return bool(np.all(self.margin(w) >= -tol))

    def contains_disk(self, other, tol=1e-9):
        return abs(other.center - self.center) + other.radius <= self.radius + tol

    def boundary(self, n=256):
        t = 2 * np.pi * np.arange(n) / n
        return self.center + self.radius * np.exp(1j * t)


@dataclass(frozen=True)
class NormEstimate:
    lower: float
    r_used: float
    argmax: complex
    n_samples: int


def pre_schwarzian_at(f, z, r_max=R_MAX):
    z = np.asarray(z, dtype=complex)
    if z.size and within_radius(z, r_max):
        fp = f.fprime_at(z, r_max)
        if np.any(np.abs(fp) <= 1e-12):
            raise VanishingDerivativeError("f' vanishes at a sample point; input is not locally univalent")
    out = f.T_at(z, r_max)
    return complex(out) if np.ndim(out) == 0 else out


def scaled_functional(f, z, r_max=R_MAX):
    """``(1 - |z|^2) T_f(z)``."""
    z = np.asarray(z, dtype=complex)
    out = (1 - np.abs(z) ** 2) * pre_schwarzian_at(f, z, r_max)
    return complex(out) if np.ndim(out) == 0 else out


def disk_center(alpha, z):
    z = np.asarray(z, dtype=complex)
    zb = np.conj(z)
    return 2 * zb + (alpha + 1) * (1 - zb) / (1 - z)


def recentered_functional(f, z, r_max=R_MAX):
    """Scaled functional minus the center of the unconditional disk."""
    return scaled_functional(f, z, r_max) - disk_center(f.alpha, z)


def variability_disk(params, z):
    """Exact set of values of ``(1-|z|^2) T_f(z)`` over Co(alpha)."""
    z = complex(z)
    if abs(z) >= 1:
        raise ValueError("z must lie in the open unit disk")
    return DiskRegion(complex(disk_center(params.alpha, z)), params.alpha - 1)


def variability_disk_fixed_a(params, z, a):
    """Values of ``(1-|z|^2) T_f(z)`` over members with ``f''(0) = alpha+1+(alpha-1)a``."""
    z, a = complex(z), complex(a)
    if abs(a) > 1 + 1e-12:
        raise ValueError(f"a must lie in the closed unit disk, got |a| = {abs(a)}")
    if abs(z) >= 1:
        raise ValueError("z must lie in the open unit disk")
    alpha = params.alpha
    zb, ab = z.conjugate(), a.conjugate()
    denom = 1 + abs(z) ** 2 + 2 * (a * z).real
    shift = (alpha - 1) * (zb * (1 + abs(a) ** 2 + ab * zb) + a) / denom
    radius = (alpha - 1) * max(0.0, 1 - abs(a) ** 2) * abs(z) / denom
    return DiskRegion(complex(disk_center(alpha, z)) + shift, radius)


def golden_section_max(fn, lo, hi, tol=1e-10, max_iter=200):
    """Maximize a unimodal ``fn`` on ``[lo, hi]``; endpoints are included in the answer.

    Returns ``(x, fn(x), evaluations)``.
    """
    best = max(((lo, fn(lo)), (hi, fn(hi))), key=lambda p: p[1])
    n = 2
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = fn(x1), fn(x2)
    n += 2
    for _ in range(max_iter):
        if abs(hi - lo) <= tol:
            break
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = fn(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = fn(x2)
        n += 1
    for cand in ((x1, f1), (x2, f2)):
        if cand[1] > best[1]:
            best = cand
    return best[0], best[1], n


def norm_estimate(f, r_cap=0.999, n_radii=64, n_angles=256, rounds=2, r_max=R_MAX):
    """Certified lower bound of ``sup_{|z| <= r_cap} (1-|z|^2)|T_f(z)|``.

    Coarse polar grid, then alternating golden-section refinement in angle and
    radius around the best cell.  The reported value is a sample maximum, so it
    never exceeds the true supremum.  Beyond ``r_max`` the closed-form
    pre-Schwarzian attached to ``f`` is used (an error if there is none).
    """
    if not 0 < r_cap <= 0.999:
        raise ValueError("r_cap must lie in (0, 0.999]")

    def weighted(z):
        return (1 - np.abs(z) ** 2) * np.abs(pre_schwarzian_at(f, z, r_max))

    grid = PolarGrid.disk(r_cap, n_radii, n_angles)
    z = grid.points()
    values = weighted(z)
    best = float(values.max())
    # tie-break: smallest angle index, then smallest radius index
    ii, jj = np.nonzero(values == best)
    k = np.lexsort((ii, jj))[0]
    i, j = int(ii[k]), int(jj[k])
    argmax = complex(z[i, j])
    n_samples = grid.size

    v0 = float(weighted(np.zeros(1))[0])
    n_samples += 1
    if v0 > best:
        best, argmax = v0, 0j

    radii = np.asarray(grid.radii)
    dtheta = 2 * np.pi / n_angles
    r, theta = float(radii[i]), float(grid.angles[j])
    r_lo = float(radii[i - 1]) if i > 0 else 0.0
    r_hi = float(radii[i + 1]) if i + 1 < len(radii) else r_cap
    for _ in range(rounds):
        theta, v, n = golden_section_max(
            lambda t: float(weighted(np.array([r * np.exp(1j * t)]))[0]),
            theta - dtheta, theta + dtheta,
        )
        n_samples += n
        if v > best:
            best, argmax = v, r * np.exp(1j * theta)
        r, v, n = golden_section_max(
            lambda rho: float(weighted(np.array([rho * np.exp(1j * theta)]))[0]), r_lo, r_hi
        )
        n_samples += n
        if v > best:
            best, argmax = v, r * np.exp(1j * theta)
    return NormEstimate(best, r_cap, complex(argmax), n_samples)


def distortion_bounds(params, r):
    """Sharp bounds for ``|f'(z)|`` on ``|z| = r``."""
    if not 0 <= r < 1:
        raise ValueError("r must lie in [0, 1)")
    a = params.alpha
    return (1 - r) ** (a - 1) / (1 + r) ** (a + 1), (1 + r) ** (a - 1) / (1 - r) ** (a + 1)


def quadrature_nodes(r, base=4096):
    """Trapezoid node count for integrands peaked on a scale ``1 - r``: ``max(base, 20/(1-r))``."""
    return max(int(base), int(math.ceil(20 / (1 - r) - 1e-6)))


def integral_means(f, p, r, n_quad=4096, r_max=R_MAX):
    """``(1/2pi) * integral |f(r e^{it})|^p dt`` by the periodic trapezoid rule."""
    if p <= 0:
        raise ValueError("p must be positive")
    if r == 0:
        return float(abs(f.coeff(0)) ** p)
    t = 2 * np.pi * np.arange(n_quad) / n_quad
    vals = np.abs(f.f_at(r * np.exp(1j * t), r_max)) ** p
    return float(np.mean(vals))


def hardy_exponent_estimate(f, p, radii=(0.9, 0.99, 0.999, 0.9999), n_quad=4096, r_max=R_MAX):
    """Least-squares slope of ``log M_p(r)`` against ``-log(1 - r)``.

    A slope near 0 indicates bounded means; near ``p*alpha - 1`` the growth of
    the extremal functions.
    """
    radii = np.asarray(radii, dtype=float)
    if radii.size < 3:
        raise InsufficientDataError("need at least three radii")
    if np.any(np.diff(radii) <= 0):
        raise ValueError("radii must be increasing")
    means = [integral_means(f, p, r, quadrature_nodes(r, n_quad), r_max) for r in radii]
    slope, _ = np.polyfit(-np.log1p(-radii), np.log(means), 1)
    return float(slope)
