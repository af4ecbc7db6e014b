"""JSON scenario files.

Layout (angles in degrees, lengths in metres)::

    {
      "room": {"size_x": 4, "size_y": 4, "size_z": 3,
               "reflectivity": 0.8 | {"ceiling": 0.8, "floor": ..., "wall_x0": ...}},
      "leds": [{"position": [x, y, z], "normal": [0, 0, -1],
                "semi_angle_deg": 4, "tx_power_w": 1}],
      "pds":  [{"position": [x, y, z], "normal": [0, 0, 1],
                "area_m2": 1e-4, "fov_deg": 90}],
      "plane_z": 0.75
    }

Everything except ``room`` sizes, LED ``position`` / ``semi_angle_deg`` and
PD ``position`` is optional.
"""

from __future__ import annotations

import json
import math

from .channel import DEFAULT_PD_AREA_M2, DEFAULT_TX_POWER_W, LedSource, Photodetector
from .errors import InvalidArgumentError, ScenarioParseError, ScenarioValidationError
from .geometry import DOWN, UNIT_TOL, UP, Pose, Vec3
from .lambertian import LambertianPattern
from .scenario import DEFAULT_REFLECTIVITY, SURFACES, WORKING_PLANE_Z, Room, Scenario

DEFAULT_FOV_DEG = 90.0

_ROOM_KEYS = {"size_x", "size_y", "size_z", "reflectivity"}
_LED_KEYS = {"position", "normal", "semi_angle_deg", "tx_power_w"}
_PD_KEYS = {"position", "normal", "area_m2", "fov_deg"}
_TOP_KEYS = {"room", "leds", "pds", "plane_z"}


def _join(path, key):
    return f"{path}.{key}" if path else key


def _number(obj, key, path, default=None):
    if key not in obj:
        if default is None:
            raise ScenarioValidationError(_join(path, key), "required field is missing")
        return float(default)
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ScenarioValidationError(_join(path, key), f"expected a finite number, got {v!r}")
    return float(v)


def _object(v, path, allowed):
    if not isinstance(v, dict):
        raise ScenarioValidationError(path or "<document>", f"expected an object, got {type(v).__name__}")
    extra = sorted(set(v) - allowed)
    if extra:
        raise ScenarioValidationError(_join(path, extra[0]), "unknown field")
    return v


def _vec(obj, key, path, default=None) -> Vec3:
    field = f"{path}.{key}"
    if key not in obj:
        if default is None:
            raise ScenarioValidationError(field, "required field is missing")
        return default
    v = obj[key]
    if not (isinstance(v, list) and len(v) == 3) or any(
        isinstance(c, bool) or not isinstance(c, (int, float)) or not math.isfinite(c) for c in v
    ):
        raise ScenarioValidationError(field, f"expected [x, y, z] of finite numbers, got {v!r}")
    return Vec3(*(float(c) for c in v))


def _unit(v: Vec3, field) -> Vec3:
    n = v.norm()
    if n == 0:
        raise ScenarioValidationError(field, "normal must be nonzero")
    # keep already-unit vectors bit-exact so parse(emit(s)) == s
    return v if abs(n - 1.0) <= UNIT_TOL else v.normalized()


def _angle(obj, key, path, lo_open, hi, hi_inclusive, default=None):
    deg = _number(obj, key, path, default)
    ok = deg > lo_open and (deg <= hi if hi_inclusive else deg < hi)
    if not ok:
        bracket = "]" if hi_inclusive else ")"
        raise ScenarioValidationError(f"{path}.{key}", f"must lie in ({lo_open}, {hi}{bracket} degrees, got {deg!r}")
    return math.radians(deg)


def _room(doc) -> Room:
    r = _object(doc, "room", _ROOM_KEYS)
    sizes = []
    for k in ("size_x", "size_y", "size_z"):
        v = _number(r, k, "room")
        if v <= 0:
            raise ScenarioValidationError(f"room.{k}", f"must be positive, got {v!r}")
        sizes.append(v)
    refl = {name: DEFAULT_REFLECTIVITY for name in SURFACES}
    raw = r.get("reflectivity", DEFAULT_REFLECTIVITY)
    if isinstance(raw, dict):
        extra = sorted(set(raw) - set(SURFACES))
        if extra:
            raise ScenarioValidationError(f"room.reflectivity.{extra[0]}", f"unknown surface; expected one of {SURFACES}")
        for name in raw:
            refl[name] = _number(raw, name, "room.reflectivity")
    elif "reflectivity" in r:
        value = _number(r, "reflectivity", "room")
        refl = {name: value for name in SURFACES}
    for name, rho in refl.items():
        if not 0.0 <= rho <= 1.0:
            field = f"room.reflectivity.{name}" if isinstance(raw, dict) else "room.reflectivity"
            raise ScenarioValidationError(field, f"must lie in [0, 1], got {rho!r}")
    return Room(*sizes, refl)


def _inside(room: Room, p: Vec3, field):
    if not room.contains(p):
        raise ScenarioValidationError(field, f"position {tuple(p)} lies outside the room")


def _led(obj, path, room) -> LedSource:
    obj = _object(obj, path, _LED_KEYS)
    pos = _vec(obj, "position", path)
    _inside(room, pos, f"{path}.position")
    normal = _unit(_vec(obj, "normal", path, DOWN), f"{path}.normal")
    semi = _angle(obj, "semi_angle_deg", path, 0.0, 90.0, hi_inclusive=False)
    power = _number(obj, "tx_power_w", path, DEFAULT_TX_POWER_W)
    if power <= 0:
        raise ScenarioValidationError(f"{path}.tx_power_w", f"must be positive, got {power!r}")
    return LedSource(Pose(pos, normal), LambertianPattern(semi), power)


def _pd(obj, path, room) -> Photodetector:
    obj = _object(obj, path, _PD_KEYS)
    pos = _vec(obj, "position", path)
    _inside(room, pos, f"{path}.position")
    normal = _unit(_vec(obj, "normal", path, UP), f"{path}.normal")
    area = _number(obj, "area_m2", path, DEFAULT_PD_AREA_M2)
    if area <= 0:
        raise ScenarioValidationError(f"{path}.area_m2", f"must be positive, got {area!r}")
    fov = _angle(obj, "fov_deg", path, 0.0, 90.0, hi_inclusive=True, default=DEFAULT_FOV_DEG)
    return Photodetector(Pose(pos, normal), area, fov)


def scenario_from_dict(doc) -> Scenario:
    doc = _object(doc, "", _TOP_KEYS)
    if "room" not in doc:
        raise ScenarioValidationError("room", "required field is missing")
    room = _room(doc["room"])
    leds_raw = doc.get("leds")
    if not isinstance(leds_raw, list) or not leds_raw:
        raise ScenarioValidationError("leds", "expected a non-empty list of LEDs")
    leds = [_led(o, f"leds[{i}]", room) for i, o in enumerate(leds_raw)]
    pds_raw = doc.get("pds", [])
    if not isinstance(pds_raw, list):
        raise ScenarioValidationError("pds", "expected a list")
    pds = [_pd(o, f"pds[{i}]", room) for i, o in enumerate(pds_raw)]
    plane_z = _number(doc, "plane_z", "", WORKING_PLANE_Z)
    if not 0.0 <= plane_z <= room.size_z:
        raise ScenarioValidationError("plane_z", f"must lie in [0, {room.size_z}], got {plane_z!r}")
    try:
        return Scenario(room, leds, pds, plane_z)
    except InvalidArgumentError as exc:  # pragma: no cover - checks above mirror Scenario's
        raise ScenarioValidationError("<document>", str(exc)) from exc


def parse_scenario(text: str) -> Scenario:
    """Parse and validate a JSON scenario document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(exc.msg, exc.lineno, exc.colno) from None
    return scenario_from_dict(doc)


def _file_degrees(rad: float) -> float:
    """Shortest decimal degree value that converts back to exactly ``rad``."""
    deg = math.degrees(rad)
    for p in range(1, 18):
        cand = float(f"{deg:.{p}g}")
        if math.radians(cand) == rad:
            return cand
    lo = hi = deg
    for _ in range(8):
        lo, hi = math.nextafter(lo, -math.inf), math.nextafter(hi, math.inf)
        for cand in (lo, hi):
            if math.radians(cand) == rad:
                return cand
    return deg  # no exact preimage; lossy by a few ulp


def scenario_to_dict(s: Scenario) -> dict:
    room = s.room
    return {
        "room": {
            "size_x": room.size_x,
            "size_y": room.size_y,
            "size_z": room.size_z,
            "reflectivity": dict(room.reflectivity),
        },
        "leds": [
            {
                "position": list(led.pose.position),
                "normal": list(led.pose.normal),
                "semi_angle_deg": _file_degrees(led.pattern.semi_angle),
                "tx_power_w": led.tx_power,
            }
            for led in s.leds
        ],
        "pds": [
            {
                "position": list(pd.pose.position),
                "normal": list(pd.pose.normal),
                "area_m2": pd.area,
                "fov_deg": _file_degrees(pd.fov),
            }
            for pd in s.pds
        ],
        "plane_z": s.plane_z,
    }


def emit_scenario(s: Scenario) -> str:
    """Canonical JSON: sorted keys, every default written out, shortest round-trip floats."""
    return json.dumps(scenario_to_dict(s), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
