"""Vector helpers and emitter/detector link geometry.

Coordinates are right-handed with z up; the floor is z = 0 and the ceiling
is z = room height. Angles are radians throughout the library.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGeometryError, InvalidArgumentError

UNIT_TOL = 1e-9


@dataclass(frozen=True)
class Vec3:
    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("x", "y", "z"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise InvalidArgumentError(f"Vec3.{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)

    def __iter__(self):
        yield self.x
        yield self.y
        yield self.z

    def __array__(self, dtype=None, copy=None):
        return np.array([self.x, self.y, self.z], dtype=dtype)

    def __sub__(self, other: Vec3) -> Vec3:
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __add__(self, other: Vec3) -> Vec3:
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __neg__(self) -> Vec3:
        return Vec3(-self.x, -self.y, -self.z)

    def scale(self, k: float) -> Vec3:
        return Vec3(k * self.x, k * self.y, k * self.z)

    def dot(self, other: Vec3) -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def norm(self) -> float:
        return math.hypot(self.x, self.y, self.z)

    def normalized(self) -> Vec3:
        n = self.norm()
        if n == 0.0:
            raise InvalidArgumentError("cannot normalize the zero vector")
        return Vec3(self.x / n, self.y / n, self.z / n)

    @classmethod
    def of(cls, seq) -> Vec3:
        x, y, z = seq
        return cls(x, y, z)


UP = Vec3(0.0, 0.0, 1.0)
DOWN = Vec3(0.0, 0.0, -1.0)


@dataclass(frozen=True)
class Pose:
    """Position plus the unit boresight normal of an emitter or detector."""

    position: Vec3
    normal: Vec3

    def __post_init__(self):
        if abs(self.normal.norm() - 1.0) > UNIT_TOL:
            raise InvalidArgumentError(
                f"Pose.normal must be a unit vector, |n| = {self.normal.norm()!r}"
            )


@dataclass(frozen=True)
class LinkGeometry:
    theta: float  # irradiance angle at the emitter
    phi: float  # incidence angle at the detector
    d: float


def _require_unit(v: Vec3, name: str) -> None:
    if abs(v.norm() - 1.0) > UNIT_TOL:
        raise InvalidArgumentError(f"{name} must be a unit vector (|{name}| = {v.norm()!r})")


def angle_between(u: Vec3, v: Vec3) -> float:
    """Angle in [0, pi] between two unit vectors."""
    _require_unit(u, "u")
    _require_unit(v, "v")
    c = min(1.0, max(-1.0, u.dot(v)))
    return math.acos(c)


def link_terms(tx_pos, tx_normal, rx_pos, rx_normal):
    """Vectorized link geometry.

    All arguments broadcast as ``(..., 3)`` arrays. Returns
    ``(cos_theta, cos_phi, d2)`` where the cosines are clamped to [-1, 1].
    Coincident points give NaN cosines; callers must reject them.
    """
    tx_pos = np.asarray(tx_pos, dtype=float)
    rx_pos = np.asarray(rx_pos, dtype=float)
    tx_normal = np.asarray(tx_normal, dtype=float)
    rx_normal = np.asarray(rx_normal, dtype=float)
    v = rx_pos - tx_pos
    # hypot keeps tiny separations from underflowing to zero
    d = np.hypot(np.hypot(v[..., 0], v[..., 1]), v[..., 2])
    d2 = d * d
    with np.errstate(invalid="ignore", divide="ignore"):
        cos_theta = np.einsum("...i,...i->...", tx_normal, v) / d
        cos_phi = -np.einsum("...i,...i->...", rx_normal, v) / d
    return np.clip(cos_theta, -1.0, 1.0), np.clip(cos_phi, -1.0, 1.0), d2


def link_geometry(tx: Pose, rx: Pose) -> LinkGeometry:
    """Irradiance angle, incidence angle and distance between two poses."""
    if tx.position == rx.position:
        raise DegenerateGeometryError(f"emitter and detector coincide at {tx.position}")
    cos_theta, cos_phi, _ = link_terms(tx.position, tx.normal, rx.position, rx.normal)
    return LinkGeometry(
        theta=float(np.arccos(cos_theta)),
        phi=float(np.arccos(cos_phi)),
        d=(rx.position - tx.position).norm(),
    )
