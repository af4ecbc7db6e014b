"""First-order (single-bounce) impulse response of an empty rectangular room.

Every room surface is tiled into small patches. Each patch is lit by the LED
pattern and re-emits as an ideal Lambertian (m = 1) reflector toward the
detector. The irradiance over a patch is integrated with a small
Gauss-Legendre rule because narrow beams vary faster than a patch width.
The LOS spike is the plain LOS gain; reflected contributions are
accumulated into delay bins.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .channel import los_gain
from .errors import InvalidArgumentError
from .fmt import fmt_num
from .geometry import Vec3, link_terms
from .lambertian import cos_power
from .scenario import Room, Scenario

SPEED_OF_LIGHT = 2.998e8  # m/s, fixed so bin indices are reproducible
DEFAULT_PATCH_SIZE = 0.05
DEFAULT_BIN_WIDTH = 0.2e-9
DEFAULT_QUAD_ORDER = 6

# name -> (fixed axis, fixed at max?, inward normal sign, (u axis, v axis))
_SURFACE_LAYOUT = {
    "ceiling": (2, True, -1.0, (0, 1)),
    "floor": (2, False, 1.0, (0, 1)),
    "wall_x0": (0, False, 1.0, (1, 2)),
    "wall_x1": (0, True, -1.0, (1, 2)),
    "wall_y0": (1, False, 1.0, (0, 2)),
    "wall_y1": (1, True, -1.0, (0, 2)),
}


@dataclass(frozen=True)
class SurfacePatch:
    center: Vec3
    normal: Vec3  # points into the room
    area: float
    reflectivity: float


@dataclass(frozen=True)
class PatchArrays:
    """Struct-of-arrays form of a patch list, used by the tracer.

    ``u_axis``/``v_axis`` span the patch plane and ``du``/``dv`` are the
    patch extents along them.
    """

    centers: np.ndarray  # (n, 3)
    normals: np.ndarray  # (n, 3)
    u_axis: np.ndarray  # (n, 3)
    v_axis: np.ndarray  # (n, 3)
    du: np.ndarray
    dv: np.ndarray
    reflectivity: np.ndarray

    @property
    def areas(self) -> np.ndarray:
        return self.du * self.dv

    def __len__(self):
        return len(self.du)


def _edges(length, step):
    # squares of side `step`, remainder strip at the far edge
    n_full = int(math.floor(length / step * (1 + 1e-12)))
    edges = [i * step for i in range(n_full + 1)]
    if length - edges[-1] > 1e-9 * length:
        edges.append(length)
    else:
        edges[-1] = length
    return np.array(edges)


def patch_arrays(room: Room, patch_size: float) -> PatchArrays:
    if not patch_size > 0:
        raise InvalidArgumentError(f"patch_size must be positive, got {patch_size!r}")
    size = (room.size_x, room.size_y, room.size_z)
    if patch_size > min(size):
        raise InvalidArgumentError(f"patch_size {patch_size} exceeds the smallest room dimension")
    parts = {k: [] for k in ("c", "n", "u", "v", "du", "dv", "rho")}
    eye = np.eye(3)
    for name, (axis, at_max, sign, (ua, va)) in _SURFACE_LAYOUT.items():
        ue = _edges(size[ua], patch_size)
        ve = _edges(size[va], patch_size)
        U, V = np.meshgrid((ue[:-1] + ue[1:]) / 2, (ve[:-1] + ve[1:]) / 2, indexing="ij")
        DU, DV = np.meshgrid(np.diff(ue), np.diff(ve), indexing="ij")
        c = np.zeros(U.shape + (3,))
        c[..., ua], c[..., va] = U, V
        c[..., axis] = size[axis] if at_max else 0.0
        count = U.size
        parts["c"].append(c.reshape(-1, 3))
        parts["n"].append(np.broadcast_to(sign * eye[axis], (count, 3)))
        parts["u"].append(np.broadcast_to(eye[ua], (count, 3)))
        parts["v"].append(np.broadcast_to(eye[va], (count, 3)))
        parts["du"].append(DU.ravel())
        parts["dv"].append(DV.ravel())
        parts["rho"].append(np.full(count, room.reflectivity[name]))
    cat = {k: np.concatenate(v) for k, v in parts.items()}
    return PatchArrays(cat["c"], cat["n"], cat["u"], cat["v"], cat["du"], cat["dv"], cat["rho"])


def discretize_surfaces(room: Room, patch_size: float) -> list[SurfacePatch]:
    """Tile all six room surfaces with patches of side at most ``patch_size``."""
    pa = patch_arrays(room, patch_size)
    return [
        SurfacePatch(Vec3.of(c), Vec3.of(n), float(a), float(r))
        for c, n, a, r in zip(pa.centers, pa.normals, pa.areas, pa.reflectivity)
    ]


def _check_indices(scenario, tx_index, rx_index):
    if not 0 <= tx_index < len(scenario.leds):
        raise InvalidArgumentError(f"tx index {tx_index} out of range (0..{len(scenario.leds) - 1})")
    if not 0 <= rx_index < len(scenario.pds):
        raise InvalidArgumentError(f"rx index {rx_index} out of range (0..{len(scenario.pds) - 1})")


def first_order_paths(scenario: Scenario, tx_index: int, rx_index: int,
                      patch_size: float = DEFAULT_PATCH_SIZE,
                      quad_order: int = DEFAULT_QUAD_ORDER):
    """Single-bounce delays (s) and gains, shape ``(n_patches, quad_order**2)``.

    Each patch is integrated with a tensor Gauss-Legendre rule; column ``q``
    holds the weighted contribution of node ``q``, so a row sums to the
    patch's gain. Returns ``(delays, gains, valid)``; nodes that coincide
    with the LED or detector are marked invalid and carry zero gain.
    """
    _check_indices(scenario, tx_index, rx_index)
    if quad_order < 1:
        raise InvalidArgumentError(f"quad_order must be >= 1, got {quad_order!r}")
    led, pd = scenario.leds[tx_index], scenario.pds[rx_index]
    pa = patch_arrays(scenario.room, patch_size)
    tx_pos, tx_n = np.asarray(led.pose.position), np.asarray(led.pose.normal)
    rx_pos, rx_n = np.asarray(pd.pose.position), np.asarray(pd.pose.normal)
    m = led.pattern.order

    nodes, weights = np.polynomial.legendre.leggauss(quad_order)
    nodes, weights = nodes / 2, weights / 2  # on [-1/2, 1/2], summing to 1
    su, sv = (a.ravel() for a in np.meshgrid(nodes, nodes, indexing="ij"))
    w = np.outer(weights, weights).ravel()

    pts = (
        pa.centers[:, None, :]
        + (pa.du[:, None] * su)[..., None] * pa.u_axis[:, None, :]
        + (pa.dv[:, None] * sv)[..., None] * pa.v_axis[:, None, :]
    )
    nrm = pa.normals[:, None, :]

    # LED -> surface point: the point plays the detector role
    cos_tx, cos_in, d1sq = link_terms(tx_pos, tx_n, pts, nrm)
    # surface point -> detector: the point plays the emitter role
    cos_out, cos_rx, d2sq = link_terms(pts, nrm, rx_pos, rx_n)

    valid = (d1sq > 0) & (d2sq > 0)
    with np.errstate(invalid="ignore"):
        in_fov = np.arccos(cos_rx) <= pd.fov
    cos_tx, cos_in, cos_out, cos_rx = (
        np.where(valid, np.maximum(c, 0.0), 0.0) for c in (cos_tx, cos_in, cos_out, cos_rx)
    )
    d1sq = np.where(valid, d1sq, 1.0)
    d2sq = np.where(valid, d2sq, 1.0)
    leg1 = (m + 1.0) * cos_power(cos_tx, m) * cos_in / (2.0 * math.pi * d1sq)
    leg2 = cos_out * cos_rx * pd.area / (math.pi * d2sq)
    dA = (pa.areas * pa.reflectivity)[:, None] * w
    gains = np.where(valid & in_fov, leg1 * dA * leg2, 0.0)
    delays = (np.sqrt(d1sq) + np.sqrt(d2sq)) / SPEED_OF_LIGHT
    return delays, gains, valid


@dataclass(frozen=True)
class ImpulseResponse:
    """LOS spike plus reflected power binned by delay.

    Bin ``k`` covers ``[t_start + k*bin_width, t_start + (k+1)*bin_width)``.
    """

    bin_width: float
    t_start: float
    bins: np.ndarray
    los_gain: float
    los_delay: float

    def bin_centers(self) -> np.ndarray:
        return self.t_start + (np.arange(len(self.bins)) + 0.5) * self.bin_width

    def nlos_gain(self) -> float:
        return math.fsum(self.bins)

    def rms_delay_spread(self) -> float:
        """Gain-weighted RMS spread of the reflected tail (s); NaN if it is empty."""
        w = np.asarray(self.bins)
        total = math.fsum(w)
        if total == 0:
            return math.nan
        t = self.bin_centers()
        mean = math.fsum(w * t) / total
        return math.sqrt(math.fsum(w * (t - mean) ** 2) / total)


def impulse_response(scenario: Scenario, tx_index: int, rx_index: int,
                     patch_size: float = DEFAULT_PATCH_SIZE,
                     bin_width: float = DEFAULT_BIN_WIDTH,
                     quad_order: int = DEFAULT_QUAD_ORDER) -> ImpulseResponse:
    if not bin_width > 0:
        raise InvalidArgumentError(f"bin_width must be positive, got {bin_width!r}")
    _check_indices(scenario, tx_index, rx_index)
    led, pd = scenario.leds[tx_index], scenario.pds[rx_index]
    h_los = los_gain(led, pd)
    d_los = (pd.pose.position - led.pose.position).norm()

    delays, gains, valid = first_order_paths(scenario, tx_index, rx_index, patch_size, quad_order)
    delays, gains = delays[valid], gains[valid]  # patch-major order
    idx = np.floor(delays / bin_width).astype(np.int64)
    if idx.size == 0:
        return ImpulseResponse(bin_width, 0.0, np.zeros(0), h_los, d_los / SPEED_OF_LIGHT)
    k0 = int(idx.min())
    # bincount accumulates in patch order -> reproducible
    bins = np.bincount(idx - k0, weights=gains)
    return ImpulseResponse(bin_width, k0 * bin_width, bins, h_los, d_los / SPEED_OF_LIGHT)


def total_gain(ir: ImpulseResponse) -> float:
    return ir.los_gain + ir.nlos_gain()


def write_impulse_csv(ir: ImpulseResponse, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["t_ns", "h"])
    writer.writerow([fmt_num(ir.los_delay * 1e9), fmt_num(ir.los_gain)])
    for t, h in zip(ir.bin_centers(), ir.bins):
        if h != 0:
            writer.writerow([fmt_num(t * 1e9), fmt_num(h)])
