"""Verification reports and sampling grids shared by every check."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np


class Status(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


@dataclass
class VerificationReport:
    suite_id: str
    status: Status
    margin: float
    n_samples: int
    seed: int | None = None
    details: list = field(default_factory=list)
    wall_time_ms: int = 0

    def __post_init__(self):
        self.status = Status(self.status)
        self.margin = float(self.margin)
        if self.status is Status.PASS and self.margin < 0:
            raise ValueError(f"{self.suite_id}: a passing report cannot carry a negative margin")

    @property
    def passed(self):
        return self.status is Status.PASS

    def to_dict(self, include_timing=False):
        d = {
            "suite_id": self.suite_id,
            "status": self.status.value,
            "margin": _finite(self.margin),
            "n_samples": int(self.n_samples),
            "seed": self.seed,
            "details": jsonable(self.details),
        }
        if include_timing:
            d["wall_time_ms"] = int(self.wall_time_ms)
        return d


def _finite(x):
    x = float(x)
    if np.isnan(x):
        return None
    if np.isinf(x):
        return 1e308 if x > 0 else -1e308
    return x


def jsonable(obj):
    """Convert numpy scalars, complex numbers and tuples into JSON-native values."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_finite(obj.real), _finite(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        return _finite(obj)
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    return obj


@dataclass(frozen=True)
class PolarGrid:
    """Tensor grid of radii times equispaced angles ``2 pi j / n_angles``."""

    radii: tuple
    n_angles: int = 256

    @classmethod
    def default(cls, r_max=0.85, n_radii=16, n_angles=256):
        return cls(tuple(np.linspace(0.1, r_max, n_radii)), n_angles)

    @classmethod
    def disk(cls, radius, n_radii=64, n_angles=256):
        """Radii ``radius * k / n_radii`` for ``k = 1..n_radii``."""
        return cls(tuple(radius * np.arange(1, n_radii + 1) / n_radii), n_angles)

    @property
    def angles(self):
        return 2 * np.pi * np.arange(self.n_angles) / self.n_angles

    def points(self):
        """Array of shape ``(len(radii), n_angles)``."""
        r = np.asarray(self.radii, dtype=float)[:, None]
        return r * np.exp(1j * self.angles)[None, :]

    @property
    def size(self):
        return len(self.radii) * self.n_angles
