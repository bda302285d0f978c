"""CSV curve export for plotting.

Curves and their columns:

* ``distortion``: r, lower, upper, sample_min, sample_max.  The samples are
  ``|f'|`` over the extremals ``g_theta`` (16 angles of theta) and the center
  function, on 256 points of ``|z| = r``.
* ``means``: r, p, M_p_g0, M_p_gpi.
* ``norm-radial``: r, sup_g0, sup_gpi, lower_bound, upper_bound.  The sups are
  estimates of ``sup_{|z|<=r}(1-|z|^2)|T_f|``; the bounds are ``2+2r`` and ``2 alpha+2r``.
* ``disk-boundary``: k, t, re, im.  Points on the boundary of the variability disk at ``z``.
"""

from __future__ import annotations

import csv

import numpy as np

from . import conclass as cc
from . import functionals as fn

CURVES = ("distortion", "means", "norm-radial", "disk-boundary")

DEFAULT_RADII = {
    "distortion": tuple(np.linspace(0.0, 0.9, 19)),
    "means": (0.5, 0.9, 0.99, 0.999),
    "norm-radial": tuple(np.linspace(0.05, 0.95, 19)),
}


def fmt(x):
    return "%.17g" % x


def _distortion_rows(config, alpha, radii):
    params = cc.ConcaveParams(alpha)
    family = [cc.extremal_g_theta(params, th, config.order) for th in 2 * np.pi * np.arange(16) / 16]
    family.append(cc.center_function(params, config.order))
    t = 2 * np.pi * np.arange(256) / 256
    for r in radii:
        lo, hi = fn.distortion_bounds(params, r)
        z = r * np.exp(1j * t)
        mods = np.concatenate([np.abs(f.fprime_at(z, config.r_max)) for f in family])
        yield (r, lo, hi, mods.min(), mods.max())


def _means_rows(config, alpha, radii, p):
    params = cc.ConcaveParams(alpha)
    g0 = cc.extremal_g_theta(params, 0.0, config.order)
    gpi = cc.extremal_g_theta(params, np.pi, config.order)
    for r in radii:
        n = fn.quadrature_nodes(r, config.n_quad) if r > 0 else 1
        yield (r, p, fn.integral_means(g0, p, r, n, config.r_max), fn.integral_means(gpi, p, r, n, config.r_max))


def _norm_rows(config, alpha, radii):
    params = cc.ConcaveParams(alpha)
    g0 = cc.extremal_g_theta(params, 0.0, config.order)
    gpi = cc.extremal_g_theta(params, np.pi, config.order)

    def sup(f, r):
        if r == 0:
            return abs(2 * f.coeff(2))
        return fn.norm_estimate(f, r, config.n_radii, config.n_angles, r_max=config.r_max).lower

    for r in radii:
        yield (r, sup(g0, r), sup(gpi, r), 2 + 2 * r, 2 * alpha + 2 * r)


def _disk_rows(alpha, z, n=256):
    disk = fn.variability_disk(cc.ConcaveParams(alpha), z)
    t = 2 * np.pi * np.arange(n) / n
    for k, (tk, w) in enumerate(zip(t, disk.boundary(n))):
        yield (k, tk, w.real, w.imag)


HEADERS = {
    "distortion": ("r", "lower", "upper", "sample_min", "sample_max"),
    "means": ("r", "p", "M_p_g0", "M_p_gpi"),
    "norm-radial": ("r", "sup_g0", "sup_gpi", "lower_bound", "upper_bound"),
    "disk-boundary": ("k", "t", "re", "im"),
}


def export_curve(config, curve_id, path, alpha=2.0, z=0.5, radii=None, p=0.4):
    """Write one curve as an RFC-4180 CSV with a header row; returns the row count."""
    if curve_id not in CURVES:
        raise ValueError(f"unknown curve {curve_id!r}; expected one of {', '.join(CURVES)}")
    if radii is None:
        radii = DEFAULT_RADII.get(curve_id, ())
    radii = [float(r) for r in radii]
    if any(not 0 <= r < 1 for r in radii):
        raise ValueError("radii must lie in [0, 1)")
    if curve_id == "distortion":
        rows = _distortion_rows(config, alpha, radii)
    elif curve_id == "means":
        rows = _means_rows(config, alpha, radii, p)
    elif curve_id == "norm-radial":
        rows = _norm_rows(config, alpha, radii)
    else:
        rows = _disk_rows(alpha, complex(z))
    rows = list(rows)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(HEADERS[curve_id])
        for row in rows:
            writer.writerow([str(v) if isinstance(v, int) else fmt(v) for v in row])
    return len(rows)
