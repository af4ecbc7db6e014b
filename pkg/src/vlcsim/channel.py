"""Line-of-sight DC gain, MIMO channel matrices and received optical power."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateGeometryError, InvalidArgumentError
from .geometry import Pose, link_terms
from .lambertian import LambertianPattern, cos_power

DEFAULT_TX_POWER_W = 1.0
DEFAULT_PD_AREA_M2 = 1e-4
DEFAULT_PD_FOV = math.pi / 2


@dataclass(frozen=True)
class LedSource:
    pose: Pose
    pattern: LambertianPattern
    tx_power: float = DEFAULT_TX_POWER_W

    def __post_init__(self):
        if not (self.tx_power > 0 and math.isfinite(self.tx_power)):
            raise InvalidArgumentError(f"tx_power must be positive, got {self.tx_power!r}")


@dataclass(frozen=True)
class Photodetector:
    pose: Pose
    area: float = DEFAULT_PD_AREA_M2
    fov: float = DEFAULT_PD_FOV  # half-angle, radians

    def __post_init__(self):
        if not (self.area > 0 and math.isfinite(self.area)):
            raise InvalidArgumentError(f"area must be positive, got {self.area!r}")
        if not (0.0 < self.fov <= math.pi / 2):
            raise InvalidArgumentError(f"fov must lie in (0, pi/2], got {self.fov!r}")


@dataclass(frozen=True)
class ChannelMatrix:
    """Gains ``h[i, j]`` from LED ``j`` to detector ``i``."""

    gains: np.ndarray

    def __post_init__(self):
        g = np.array(self.gains, dtype=float)
        if g.ndim != 2 or 0 in g.shape:
            raise InvalidArgumentError(f"gains must be a non-empty 2-D matrix, got shape {g.shape}")
        if not np.all(np.isfinite(g)) or np.any(g < 0):
            raise InvalidArgumentError("gains must be finite and nonnegative")
        g.flags.writeable = False
        object.__setattr__(self, "gains", g)

    @property
    def n_rx(self) -> int:
        return self.gains.shape[0]

    @property
    def n_tx(self) -> int:
        return self.gains.shape[1]


def gain_kernel(tx_pos, tx_normal, order, rx_pos, rx_normal, area, fov):
    """Vectorized LOS gain; arguments broadcast over leading axes.

    Coincident emitter/detector points yield NaN. ``los_gain`` and the
    power-map sweep both go through here.
    """
    cos_theta, cos_phi, d2 = link_terms(tx_pos, tx_normal, rx_pos, rx_normal)
    phi = np.arccos(cos_phi)
    accept = (cos_theta > 0.0) & (cos_phi > 0.0) & (phi <= fov)
    with np.errstate(invalid="ignore", divide="ignore"):
        h = (order + 1.0) * area * cos_power(cos_theta, order) * cos_phi / (2.0 * math.pi * d2)
    h = np.where(accept, h, 0.0)
    return np.where(d2 == 0.0, np.nan, h)


def los_gain(tx: LedSource, rx: Photodetector) -> float:
    """Dimensionless LOS DC gain of one emitter/detector link.

    Zero when the detector sits outside the emitter's forward hemisphere or
    when the incidence angle exceeds the detector field of view (the FOV
    boundary itself is accepted).
    """
    if tx.pose.position == rx.pose.position:
        raise DegenerateGeometryError(f"LED and detector coincide at {tx.pose.position}")
    h = float(gain_kernel(
        tx.pose.position, tx.pose.normal, tx.pattern.order,
        rx.pose.position, rx.pose.normal, rx.area, rx.fov,
    ))
    if not math.isfinite(h):
        raise DegenerateGeometryError(f"LED and detector too close to resolve ({tx.pose.position}, {rx.pose.position})")
    return h


def channel_matrix(leds: Sequence[LedSource], pds: Sequence[Photodetector]) -> ChannelMatrix:
    if not leds or not pds:
        raise InvalidArgumentError("channel_matrix needs at least one LED and one detector")
    gains = np.empty((len(pds), len(leds)))
    for i, pd in enumerate(pds):
        for j, led in enumerate(leds):
            gains[i, j] = los_gain(led, pd)
    return ChannelMatrix(gains)


def received_power(leds: Sequence[LedSource], H: ChannelMatrix) -> np.ndarray:
    """Optical power (W) at each detector, summed over LEDs."""
    if len(leds) != H.n_tx:
        raise InvalidArgumentError(f"{len(leds)} LEDs given for a matrix with {H.n_tx} columns")
    p_tx = np.array([led.tx_power for led in leds])
    # explicit left-to-right sum keeps superposition reproducible
    out = np.zeros(H.n_rx)
    for j in range(H.n_tx):
        out = out + H.gains[:, j] * p_tx[j]
    return out


def write_channel_csv(H: ChannelMatrix, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["rx_index"] + [f"tx_{j}" for j in range(H.n_tx)])
    for i in range(H.n_rx):
        writer.writerow([i] + [f"{g:.8e}" for g in H.gains[i]])


def read_channel_csv(fh) -> ChannelMatrix:
    rows = list(csv.reader(fh))
    if not rows or rows[0][0] != "rx_index":
        raise InvalidArgumentError("not a channel-matrix CSV (missing rx_index header)")
    return ChannelMatrix(np.array([[float(v) for v in r[1:]] for r in rows[1:]]))
