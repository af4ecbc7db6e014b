"""Received-power sweeps over the working plane, coverage and interference metrics."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import RectBivariateSpline

from .channel import DEFAULT_PD_AREA_M2, DEFAULT_PD_FOV, gain_kernel
from .errors import DegenerateGeometryError, InvalidArgumentError
from .fmt import fmt_num
from .geometry import UP
from .scenario import Scenario

DEFAULT_GRID = 81


@dataclass(frozen=True)
class GridSpec:
    nx: int = DEFAULT_GRID
    ny: int = DEFAULT_GRID

    def __post_init__(self):
        if int(self.nx) != self.nx or int(self.ny) != self.ny or self.nx < 2 or self.ny < 2:
            raise InvalidArgumentError(f"grid needs integer nx, ny >= 2, got {self.nx}x{self.ny}")

    @classmethod
    def parse(cls, text: str) -> GridSpec:
        """Parse ``"NXxNY"`` (e.g. ``"81x81"``)."""
        try:
            nx, ny = (int(v) for v in text.lower().split("x"))
        except ValueError:
            raise InvalidArgumentError(f"grid must look like 81x81, got {text!r}") from None
        return cls(nx, ny)


@dataclass(frozen=True)
class PowerMap:
    """Received power in W; ``values[i, j]`` sits at ``(xs[i], ys[j])``."""

    xs: np.ndarray
    ys: np.ndarray
    values: np.ndarray
    plane_z: float | None = None

    @property
    def grid(self) -> GridSpec:
        return GridSpec(len(self.xs), len(self.ys))


def grid_axes(scenario: Scenario, grid: GridSpec):
    room = scenario.room
    xs = np.arange(grid.nx) * room.size_x / (grid.nx - 1)
    ys = np.arange(grid.ny) * room.size_y / (grid.ny - 1)
    return xs, ys


def _plane_points(scenario, grid):
    xs, ys = grid_axes(scenario, grid)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    pts = np.stack([X, Y, np.full_like(X, scenario.plane_z)], axis=-1)
    return xs, ys, pts


def per_led_maps(scenario: Scenario, grid: GridSpec) -> np.ndarray:
    """Received power from each LED separately, shape ``(n_leds, nx, ny)``.

    Every grid point carries an upward-facing probe detector with the
    default area and field of view.
    """
    xs, ys, pts = _plane_points(scenario, grid)
    out = np.empty((len(scenario.leds), grid.nx, grid.ny))
    up = np.asarray(UP)
    for k, led in enumerate(scenario.leds):
        h = gain_kernel(
            np.asarray(led.pose.position), np.asarray(led.pose.normal), led.pattern.order,
            pts, up, DEFAULT_PD_AREA_M2, DEFAULT_PD_FOV,
        )
        if np.isnan(h).any():
            raise DegenerateGeometryError(f"grid point coincides with LED {k} at {led.pose.position}")
        out[k] = led.tx_power * h
    return out


def sweep_plane(scenario: Scenario, grid: GridSpec = GridSpec()) -> PowerMap:
    xs, ys = grid_axes(scenario, grid)
    per_led = per_led_maps(scenario, grid)
    total = np.zeros((grid.nx, grid.ny))
    for layer in per_led:  # fixed LED order
        total = total + layer
    return PowerMap(xs, ys, total, scenario.plane_z)


def interpolate(pmap: PowerMap, x: float, y: float) -> float:
    """Interpolated power at ``(x, y)``: bicubic spline through the grid values.

    Falls back to lower spline degree on grids with fewer than four points
    per axis (bilinear on a 2x2 grid).
    """
    xs, ys = pmap.xs, pmap.ys
    if not (xs[0] <= x <= xs[-1] and ys[0] <= y <= ys[-1]):
        raise InvalidArgumentError(f"({x}, {y}) lies outside the map")
    spline = RectBivariateSpline(
        xs, ys, pmap.values, kx=min(3, len(xs) - 1), ky=min(3, len(ys) - 1), s=0
    )
    return float(spline(x, y)[0, 0])


def watts_to_dbm(p: float) -> float:
    """10 log10(P / 1 mW); zero power maps to -inf."""
    if p == 0:
        return -math.inf
    return 10.0 * math.log10(p / 1e-3)


@dataclass(frozen=True)
class CoverageMetrics:
    peak_w: float
    peak_dbm: float
    min_w: float
    min_dbm: float
    dynamic_range_db: float
    covered_fraction: float
    threshold_db: float
    all_zero: bool = False


def coverage_metrics(pmap: PowerMap, relative_threshold_db: float = 3.0) -> CoverageMetrics:
    """Peak/minimum power and the share of points within the threshold of the peak."""
    values = np.asarray(pmap.values, dtype=float)
    if values.size == 0:
        raise InvalidArgumentError("empty power map")
    if relative_threshold_db < 0:
        raise InvalidArgumentError("threshold must be >= 0 dB")
    peak = float(values.max())
    low = float(values.min())
    if peak == 0.0:
        return CoverageMetrics(0.0, -math.inf, 0.0, -math.inf, math.nan, 0.0,
                               relative_threshold_db, all_zero=True)
    floor = peak * 10.0 ** (-relative_threshold_db / 10.0)
    covered = np.count_nonzero(values >= floor) / values.size
    dyn = math.inf if low == 0.0 else 10.0 * math.log10(peak / low)
    return CoverageMetrics(peak, watts_to_dbm(peak), low, watts_to_dbm(low), dyn,
                           covered, relative_threshold_db)


@dataclass(frozen=True)
class InterferenceMap:
    """Dominant LED index and co-channel interference ratio per grid point.

    ``dominant`` is -1 and ``ratio`` NaN where no LED reaches the point.
    """

    xs: np.ndarray
    ys: np.ndarray
    dominant: np.ndarray
    ratio: np.ndarray

    def mean_ratio(self) -> float:
        defined = self.ratio[~np.isnan(self.ratio)]
        return float(np.mean(defined)) if defined.size else math.nan


def interference_map(scenario: Scenario, grid: GridSpec = GridSpec()) -> InterferenceMap:
    if len(scenario.leds) < 2:
        raise InvalidArgumentError("interference needs at least two LEDs")
    xs, ys = grid_axes(scenario, grid)
    per_led = per_led_maps(scenario, grid)
    dominant = np.argmax(per_led, axis=0)  # first maximum wins ties
    dom_power = np.take_along_axis(per_led, dominant[None], axis=0)[0]
    undefined = dom_power == 0.0
    # sum of per-interferer ratios: no cancellation, and equal gains give exact integers
    ratio = np.zeros_like(dom_power)
    with np.errstate(invalid="ignore", divide="ignore"):
        for k, layer in enumerate(per_led):
            ratio = ratio + np.where(dominant == k, 0.0, layer / dom_power)
    ratio = np.where(undefined, np.nan, ratio)
    dominant = np.where(undefined, -1, dominant)
    return InterferenceMap(xs, ys, dominant, ratio)


def write_power_map_csv(pmap: PowerMap, fh) -> None:
    """Rows in row-major order with x varying fastest."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["x_m", "y_m", "p_w", "p_dbm"])
    for j, y in enumerate(pmap.ys):
        for i, x in enumerate(pmap.xs):
            p = float(pmap.values[i, j])
            dbm = "" if p == 0 else fmt_num(watts_to_dbm(p))
            writer.writerow([fmt_num(x), fmt_num(y), fmt_num(p), dbm])


def read_power_map_csv(fh) -> PowerMap:
    reader = csv.DictReader(fh)
    if reader.fieldnames is None or reader.fieldnames[:3] != ["x_m", "y_m", "p_w"]:
        raise InvalidArgumentError("not a power-map CSV (expected header x_m,y_m,p_w,p_dbm)")
    rows = [(float(r["x_m"]), float(r["y_m"]), float(r["p_w"])) for r in reader]
    if not rows:
        raise InvalidArgumentError("power-map CSV has no data rows")
    xs = np.array(sorted({r[0] for r in rows}))
    ys = np.array(sorted({r[1] for r in rows}))
    if len(rows) != len(xs) * len(ys):
        raise InvalidArgumentError("power-map CSV is not a complete rectangular grid")
    xi = {x: i for i, x in enumerate(xs)}
    yi = {y: j for j, y in enumerate(ys)}
    values = np.zeros((len(xs), len(ys)))
    for x, y, p in rows:
        values[xi[x], yi[y]] = p
    return PowerMap(xs, ys, values)


def write_interference_csv(imap: InterferenceMap, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["x_m", "y_m", "dominant_tx", "interference_ratio"])
    for j, y in enumerate(imap.ys):
        for i, x in enumerate(imap.xs):
            r = float(imap.ratio[i, j])
            if math.isnan(r):
                writer.writerow([fmt_num(x), fmt_num(y), "", ""])
            else:
                writer.writerow([fmt_num(x), fmt_num(y), int(imap.dominant[i, j]), fmt_num(r)])
