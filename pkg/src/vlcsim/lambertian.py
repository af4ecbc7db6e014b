"""Lambertian emission pattern: order from half-power semi-angle, radiant intensity."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import OutOfDomainError


def lambertian_order(semi_angle: float) -> float:
    """Lambertian order m for a half-power semi-angle given in radians.

    >>> round(lambertian_order(math.radians(60)), 12)
    1.0
    """
    if not (0.0 < semi_angle < math.pi / 2):
        raise OutOfDomainError(f"semi-angle must lie in (0, pi/2), got {semi_angle!r}")
    return -math.log(2.0) / math.log(math.cos(semi_angle))


@dataclass(frozen=True)
class LambertianPattern:
    """Emission pattern built from the semi-angle; ``order`` is always derived."""

    semi_angle: float
    order: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "semi_angle", float(self.semi_angle))
        object.__setattr__(self, "order", lambertian_order(self.semi_angle))

    @classmethod
    def from_degrees(cls, semi_angle_deg: float) -> LambertianPattern:
        return cls(math.radians(semi_angle_deg))


def cos_power(cos_theta, m):
    """cos(theta)**m evaluated as exp(m ln cos theta); zero where cos_theta <= 0."""
    c = np.asarray(cos_theta, dtype=float)
    out = np.zeros_like(c)
    pos = c > 0.0
    out[pos] = np.exp(m * np.log(c[pos]))
    return out


def radiant_intensity(pattern: LambertianPattern, theta):
    """Normalized radiant intensity (m+1) cos^m(theta) / 2pi, per steradian.

    Zero outside the forward hemisphere (theta >= pi/2). Accepts scalars or
    arrays of angles.
    """
    theta = np.asarray(theta, dtype=float)
    m = pattern.order
    c = np.where(theta < math.pi / 2, np.cos(theta), 0.0)
    r = (m + 1.0) * cos_power(c, m) / (2.0 * math.pi)
    return float(r) if r.ndim == 0 else r
