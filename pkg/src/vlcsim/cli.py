"""Command-line driver: ``vlcsim <subcommand> ...``."""

from __future__ import annotations

import argparse
import contextlib
import math
import sys

from . import __version__
from .channel import channel_matrix, write_channel_csv
from .errors import VlcSimError
from .fmt import fmt_num
from .powermap import (
    GridSpec,
    coverage_metrics,
    interference_map,
    read_power_map_csv,
    sweep_plane,
    write_interference_csv,
    write_power_map_csv,
)
from .raytrace import DEFAULT_BIN_WIDTH, DEFAULT_PATCH_SIZE, impulse_response, write_impulse_csv
from .scenario import PRESETS, get_preset, preset_scenario
from .scenario_io import parse_scenario


@contextlib.contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _load_scenario(args):
    if args.preset is not None:
        return preset_scenario(get_preset(args.preset))
    with open(args.scenario, encoding="utf-8") as fh:
        return parse_scenario(fh.read())


def _cmd_scenarios(args):
    print("name,led_spacing_m,semi_angle_deg,detector_spacing_m")
    for p in PRESETS:
        print(f"{p.name},{fmt_num(p.led_spacing)},{fmt_num(p.irradiance_angle)},{fmt_num(p.detector_spacing)}")


def _cmd_power_map(args):
    scenario = _load_scenario(args)
    grid = GridSpec.parse(args.grid)
    pmap = sweep_plane(scenario, grid)
    with _output(args.out) as fh:
        write_power_map_csv(pmap, fh)
    if args.interference:
        with _output(args.interference) as fh:
            write_interference_csv(interference_map(scenario, grid), fh)


def _cmd_channel_matrix(args):
    scenario = _load_scenario(args)
    H = channel_matrix(scenario.leds, scenario.pds)
    with _output(args.out) as fh:
        write_channel_csv(H, fh)


def _cmd_impulse(args):
    scenario = _load_scenario(args)
    ir = impulse_response(scenario, args.tx, args.rx, args.patch, args.bin * 1e-9)
    with _output(args.out) as fh:
        write_impulse_csv(ir, fh)


def _fmt_metric(v):
    if isinstance(v, bool):
        return str(v).lower()
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if math.isnan(v):
        return "nan"
    return fmt_num(v)


def _cmd_metrics(args):
    with open(args.map, encoding="utf-8") as fh:
        pmap = read_power_map_csv(fh)
    m = coverage_metrics(pmap, args.threshold_db)
    for key in ("peak_w", "peak_dbm", "min_w", "min_dbm", "dynamic_range_db",
                "covered_fraction", "threshold_db", "all_zero"):
        print(f"{key}: {_fmt_metric(getattr(m, key))}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vlcsim", description="Indoor visible-light channel simulator.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sc = sub.add_parser("scenarios", help="built-in presets")
    sc.add_argument("action", choices=["list"])
    sc.set_defaults(func=_cmd_scenarios)

    def scenario_source(p):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--preset", metavar="NAME", help="e.g. table1:4deg")
        src.add_argument("--scenario", metavar="FILE", help="scenario JSON file")
        p.add_argument("--out", metavar="FILE", help="output CSV (default: stdout)")

    pm = sub.add_parser("power-map", help="received power over the working plane")
    scenario_source(pm)
    pm.add_argument("--grid", default="81x81", metavar="NXxNY")
    pm.add_argument("--interference", metavar="FILE", help="also write the interference CSV")
    pm.set_defaults(func=_cmd_power_map)

    cm = sub.add_parser("channel-matrix", help="LOS gains between every LED and detector")
    scenario_source(cm)
    cm.set_defaults(func=_cmd_channel_matrix)

    ir = sub.add_parser("impulse-response", help="LOS plus first-order reflections")
    scenario_source(ir)
    ir.add_argument("--tx", type=int, required=True)
    ir.add_argument("--rx", type=int, required=True)
    ir.add_argument("--patch", type=float, default=DEFAULT_PATCH_SIZE, metavar="METERS")
    ir.add_argument("--bin", type=float, default=DEFAULT_BIN_WIDTH * 1e9, metavar="NANOSECONDS")
    ir.set_defaults(func=_cmd_impulse)

    mt = sub.add_parser("metrics", help="coverage metrics from a power-map CSV")
    mt.add_argument("--map", required=True, metavar="FILE")
    mt.add_argument("--threshold-db", type=float, default=3.0, metavar="DB")
    mt.set_defaults(func=_cmd_metrics)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors, --help, --version
        return int(exc.code or 0)
    try:
        args.func(args)
    except (VlcSimError, OSError) as exc:
        print(f"vlcsim: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
