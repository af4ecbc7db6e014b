"""Indoor visible-light communication channel simulator.

Lambertian LED emitters, photodetectors, LOS channel gains and MIMO channel
matrices, received-power maps over a working plane, and first-order
reflection impulse responses.
"""

__version__ = "0.1.0"

from .channel import (
    ChannelMatrix,
    LedSource,
    Photodetector,
    channel_matrix,
    los_gain,
    received_power,
)
from .errors import (
    DegenerateGeometryError,
    InvalidArgumentError,
    OutOfDomainError,
    ScenarioParseError,
    ScenarioValidationError,
    VlcSimError,
)
from .geometry import LinkGeometry, Pose, Vec3, angle_between, link_geometry
from .lambertian import LambertianPattern, lambertian_order, radiant_intensity
from .powermap import (
    CoverageMetrics,
    GridSpec,
    InterferenceMap,
    PowerMap,
    coverage_metrics,
    interference_map,
    sweep_plane,
)
from .raytrace import (
    ImpulseResponse,
    SurfacePatch,
    discretize_surfaces,
    impulse_response,
    total_gain,
)
from .scenario import PRESETS, Room, Scenario, ScenarioPreset, get_preset, preset_scenario
from .scenario_io import emit_scenario, parse_scenario
