"""Room, scenario and the four built-in room presets."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

from .channel import LedSource, Photodetector
from .errors import InvalidArgumentError
from .geometry import DOWN, UP, Pose, Vec3
from .lambertian import LambertianPattern

SURFACES = ("ceiling", "floor", "wall_x0", "wall_x1", "wall_y0", "wall_y1")
DEFAULT_REFLECTIVITY = 0.8


def _default_reflectivity():
    return {name: DEFAULT_REFLECTIVITY for name in SURFACES}


@dataclass(frozen=True)
class Room:
    """Axis-aligned box [0, size_x] x [0, size_y] x [0, size_z].

    ``reflectivity`` maps each of the six surface names in ``SURFACES`` to a
    diffuse reflectance in [0, 1]. ``wall_x0`` is the wall in the plane x = 0.
    """

    size_x: float
    size_y: float
    size_z: float
    reflectivity: Mapping[str, float] = field(default_factory=_default_reflectivity)

    def __post_init__(self):
        for name in ("size_x", "size_y", "size_z"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise InvalidArgumentError(f"room.{name} must be positive, got {v!r}")
        refl = dict(self.reflectivity)
        if set(refl) != set(SURFACES):
            raise InvalidArgumentError(f"reflectivity must name exactly the surfaces {SURFACES}")
        for name, rho in refl.items():
            if not (0.0 <= rho <= 1.0):
                raise InvalidArgumentError(f"reflectivity[{name!r}] must lie in [0, 1], got {rho!r}")
        object.__setattr__(self, "reflectivity", MappingProxyType({k: float(refl[k]) for k in SURFACES}))

    def __eq__(self, other):
        if not isinstance(other, Room):
            return NotImplemented
        return (
            (self.size_x, self.size_y, self.size_z) == (other.size_x, other.size_y, other.size_z)
            and dict(self.reflectivity) == dict(other.reflectivity)
        )

    def __hash__(self):
        return hash((self.size_x, self.size_y, self.size_z, tuple(self.reflectivity.values())))

    def contains(self, p: Vec3) -> bool:
        return 0 <= p.x <= self.size_x and 0 <= p.y <= self.size_y and 0 <= p.z <= self.size_z

    def with_reflectivity(self, rho) -> Room:
        """Copy with every surface set to ``rho`` (a float) or to a mapping."""
        if not isinstance(rho, Mapping):
            rho = {name: rho for name in SURFACES}
        return Room(self.size_x, self.size_y, self.size_z, rho)


@dataclass(frozen=True)
class Scenario:
    room: Room
    leds: tuple[LedSource, ...]
    pds: tuple[Photodetector, ...] = ()
    plane_z: float = 0.75

    def __post_init__(self):
        object.__setattr__(self, "leds", tuple(self.leds))
        object.__setattr__(self, "pds", tuple(self.pds))
        for i, led in enumerate(self.leds):
            if not self.room.contains(led.pose.position):
                raise InvalidArgumentError(f"leds[{i}] position {led.pose.position} lies outside the room")
        for i, pd in enumerate(self.pds):
            if not self.room.contains(pd.pose.position):
                raise InvalidArgumentError(f"pds[{i}] position {pd.pose.position} lies outside the room")
        if not (0.0 <= self.plane_z <= self.room.size_z):
            raise InvalidArgumentError(f"plane_z must lie in [0, {self.room.size_z}], got {self.plane_z!r}")


@dataclass(frozen=True)
class ScenarioPreset:
    name: str
    led_spacing: float  # m
    irradiance_angle: float  # deg, used as the LED semi-angle
    detector_spacing: float  # m


# Same room and spacings, four LED semi-angles from narrow to wide.
PRESETS = (
    ScenarioPreset("table1:4deg", 1.5, 4.0, 0.5),
    ScenarioPreset("table1:5deg", 1.5, 5.0, 0.5),
    ScenarioPreset("table1:7deg", 1.5, 7.0, 0.5),
    ScenarioPreset("table1:8deg", 1.5, 8.0, 0.5),
)

ROOM_SIZE = (4.0, 4.0, 3.0)
LED_HEIGHT = 3.0
WORKING_PLANE_Z = LED_HEIGHT - 2.25


def get_preset(name: str) -> ScenarioPreset:
    for p in PRESETS:
        if p.name == name:
            return p
    raise InvalidArgumentError(f"unknown preset {name!r}; choose from {[p.name for p in PRESETS]}")


def _square(cx, cy, z, side):
    h = side / 2
    return [Vec3(cx + sx * h, cy + sy * h, z) for sx in (-1, 1) for sy in (-1, 1)]


def preset_scenario(preset: ScenarioPreset) -> Scenario:
    """Build the 4-LED / 4-detector room for one preset row.

    LEDs face down from the ceiling in a square of side ``led_spacing``
    centred on the room; detectors face up on the working plane in a square
    of side ``detector_spacing``.
    """
    if preset not in PRESETS:
        raise InvalidArgumentError(f"unknown preset {preset!r}")
    sx, sy, sz = ROOM_SIZE
    pattern = LambertianPattern.from_degrees(preset.irradiance_angle)
    leds = [
        LedSource(Pose(p, DOWN), pattern)
        for p in _square(sx / 2, sy / 2, LED_HEIGHT, preset.led_spacing)
    ]
    pds = [
        Photodetector(Pose(p, UP))
        for p in _square(sx / 2, sy / 2, WORKING_PLANE_Z, preset.detector_spacing)
    ]
    return Scenario(Room(sx, sy, sz), leds, pds, WORKING_PLANE_Z)
