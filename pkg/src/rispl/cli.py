"""Command-line interface.

Exit status is 0 on success, 1 for invalid input and 2 for I/O failures.
Angles on the command line are in degrees.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from dataclasses import replace

import numpy as np

from . import __version__
from .geometry import GeometryError, SphericalPlacement
from .pathloss import REGIMES, LinkGeometry, field_region
from .presets import RIS_PRESETS, PresetError, default_antenna, ris_preset
from .radiation import CosinePattern, gain_closed_form, gain_from_pattern, to_db
from .ris import ConfigError, PhaseProfile, power_consumption, wrap_phase
from .scenario import (
    DESIGN_KINDS,
    SWEEP_MODES,
    CalibrationSpec,
    PhaseDesign,
    Scenario,
    ScenarioError,
    SweepGrid,
    SweepRow,
    SweepSpec,
    compare_measurements,
    evaluate,
    load_scenario,
    read_measurements,
    run_angular_heatmap,
    run_distance_sweep,
)

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2
DEFAULT_SEED = 20240101


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage mistakes are input validation errors, not I/O errors
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


# --- scenario assembly ----------------------------------------------------------


def _scenario_from_args(args) -> Scenario:
    if args.config and args.preset:
        raise UsageError("use either --config or --preset, not both")
    if args.config:
        sc = load_scenario(args.config)
    elif args.preset:
        if args.preset not in RIS_PRESETS:
            raise PresetError(f"--preset must name a RIS preset ({', '.join(sorted(RIS_PRESETS))})")
        cfg = ris_preset(args.preset)
        ant = default_antenna(args.preset)
        link = LinkGeometry(SphericalPlacement.from_degrees(100.0, 45.0, 180.0),
                            SphericalPlacement.from_degrees(100.0, 45.0, 0.0), ant, ant)
        sc = Scenario(cfg, link, PhaseDesign(), None, CalibrationSpec())
    else:
        raise UsageError("a scenario is required: pass --config FILE or --preset NAME")
    return _apply_overrides(sc, args)


def _apply_overrides(sc: Scenario, args) -> Scenario:
    link = sc.link
    tx, rx = link.tx, link.rx
    if getattr(args, "d1", None) is not None:
        tx = replace(tx, distance=args.d1)
    if getattr(args, "theta_t", None) is not None:
        tx = replace(tx, theta=math.radians(args.theta_t))
    if getattr(args, "phi_t", None) is not None:
        tx = replace(tx, phi=math.radians(args.phi_t))
    if getattr(args, "d2", None) is not None:
        rx = replace(rx, distance=args.d2)
    if getattr(args, "theta_r", None) is not None:
        rx = replace(rx, theta=math.radians(args.theta_r))
    if getattr(args, "phi_r", None) is not None:
        rx = replace(rx, phi=math.radians(args.phi_r))
    link = LinkGeometry(tx, rx, link.tx_antenna, link.rx_antenna)
    design = sc.design
    kind = getattr(args, "design", None)
    if kind is not None and kind != "random":
        th = getattr(args, "theta_des", None)
        ph = getattr(args, "phi_des", None)
        design = PhaseDesign(kind=kind,
                             theta_des=None if th is None else math.radians(th),
                             phi_des=None if ph is None else math.radians(ph),
                             path=getattr(args, "profile", None))
    sweep = sc.sweep
    if sweep is not None:
        sweep = replace(sweep, cfg=sc.cfg, link=link, design=design)
    return Scenario(sc.cfg, link, design, sweep, sc.calibration)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- subcommands ----------------------------------------------------------------


def cmd_gain(args) -> str:
    pat = CosinePattern(args.alpha)
    g = gain_from_pattern(pat) if args.numeric else gain_closed_form(pat)
    if args.format == "json":
        return json.dumps({"alpha": args.alpha, "gain_linear": g, "gain_dbi": float(to_db(g))}) + "\n"
    return f"{g:.6f} linear, {float(to_db(g)):.4f} dBi\n"


def cmd_boundary(args) -> str:
    sc = _scenario_from_args(args)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rep = field_region(sc.cfg, sc.link)
    if args.format == "json":
        return json.dumps({
            "classic_boundary_m": rep.classic_boundary, "l_bound_m": rep.redefined_boundary,
            "lower_bound_m": rep.lower_bound, "tx_region": rep.tx_region, "rx_region": rep.rx_region,
            "below_lower_bound": rep.below_lower_bound,
        }) + "\n"
    lines = [
        f"classic boundary 2D^2/lambda: {rep.classic_boundary:.2f} m",
        f"L_bound: {rep.redefined_boundary:.2f} m",
        f"lower bound 5 lambda: {rep.lower_bound:.4f} m",
        f"tx region: {rep.tx_region}, rx region: {rep.rx_region}",
    ]
    if rep.below_lower_bound:
        lines.append(f"warning: a terminal is {rep.min_cell_distance:.4f} m from a unit cell (< 5 lambda)")
    return "\n".join(lines) + "\n"


def cmd_power(args) -> str:
    sc = _scenario_from_args(args)
    regimes = args.regime or ["general"]
    rows = []
    for regime in regimes:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            res = evaluate(sc.cfg, sc.link, sc.design, regime, args.p_t)
        rows.append(SweepRow(sc.link.d1, sc.link.d2, sc.link.rx.theta, sc.link.rx.phi, regime,
                             res.received_power, res.path_loss, res.in_coverage))
    grid = SweepGrid(rows)
    return grid.to_json() if args.format == "json" else grid.to_csv()


def cmd_phase_design(args) -> str:
    sc = _scenario_from_args(args)
    if args.design == "random":
        rng = np.random.default_rng(args.seed)
        prof = PhaseProfile(wrap_phase(rng.uniform(0.0, 2 * math.pi, sc.cfg.shape)))
    else:
        prof = sc.design.build(sc.cfg, sc.link)
    if args.format == "json":
        return json.dumps({"rows": sc.cfg.rows, "cols": sc.cfg.cols,
                           "phases": prof.phases.tolist()}) + "\n"
    return "\n".join(",".join(f"{v:.9g}" for v in row) for row in prof.phases) + "\n"


def _sweep_spec(args, sc: Scenario, mode_default: str) -> SweepSpec:
    spec = sc.sweep or SweepSpec(mode=mode_default, cfg=sc.cfg, link=sc.link, design=sc.design)
    over = {}
    for key, attr in (("start", "start"), ("stop", "stop"), ("step", "step"),
                      ("resolution", "resolution_deg"), ("p_t", "p_t")):
        val = getattr(args, key, None)
        if val is not None:
            over[attr] = val
    if getattr(args, "mode", None):
        over["mode"] = args.mode
    if getattr(args, "regime", None):
        over["regimes"] = tuple(args.regime)
    return replace(spec, **over) if over else spec


def cmd_sweep(args) -> str:
    sc = _scenario_from_args(args)
    spec = _sweep_spec(args, sc, "distance_d2")
    if spec.mode == "angular_heatmap":
        raise UsageError("angular sweeps are run with the 'heatmap' subcommand")
    grid = run_distance_sweep(spec)
    return grid.to_json() if args.format == "json" else grid.to_csv()


def cmd_heatmap(args) -> str:
    sc = _scenario_from_args(args)
    spec = replace(_sweep_spec(args, sc, "angular_heatmap"), mode="angular_heatmap", regimes=("general",))
    grid = run_angular_heatmap(spec).to_grid()
    th, ph = math.degrees(grid.argmax.theta_r), math.degrees(grid.argmax.phi_r)
    sys.stderr.write(f"argmax: theta_r={th:.1f} deg, phi_r={ph:.1f} deg, "
                     f"{grid.argmax.received_dbm:.4f} dBm\n")
    return grid.to_json() if args.format == "json" else grid.to_csv()


def cmd_compare(args) -> str:
    sc = _scenario_from_args(args)
    records = read_measurements(args.measurements)
    spec = _sweep_spec(args, sc, "distance_d2")
    cal = sc.calibration
    if args.cal_gain is not None or args.outlier_db is not None:
        cal = CalibrationSpec(gain=cal.gain if args.cal_gain is None else args.cal_gain,
                              outlier_threshold_db=(cal.outlier_threshold_db if args.outlier_db is None
                                                    else args.outlier_db))
    rep = compare_measurements(records, spec, cal)
    return rep.to_json() if args.format == "json" else rep.to_csv()


def cmd_power_consumption(args) -> str:
    w = power_consumption(args.kind, args.n_on, args.n_cells)
    if args.format == "json":
        return json.dumps({"kind": args.kind, "n_on": args.n_on, "power_w": w}) + "\n"
    return f"{w:.6f} W\n"


# --- parser ---------------------------------------------------------------------


def _scenario_flags(p: argparse.ArgumentParser, link: bool = True) -> None:
    p.add_argument("--config", help="scenario JSON file (sections ris, tx_antenna, rx_antenna, "
                                    "link, sweep, phase_design, calibration)")
    p.add_argument("--preset", help=f"built-in RIS preset: {', '.join(sorted(RIS_PRESETS))}")
    if link:
        g = p.add_argument_group("link overrides (meters, degrees)")
        g.add_argument("--d1", type=float, help="Tx distance to the RIS centre")
        g.add_argument("--theta-t", type=float, help="Tx elevation")
        g.add_argument("--phi-t", type=float, help="Tx azimuth")
        g.add_argument("--d2", type=float, help="Rx distance to the RIS centre")
        g.add_argument("--theta-r", type=float, help="Rx elevation")
        g.add_argument("--phi-r", type=float, help="Rx azimuth")


def _design_flags(p: argparse.ArgumentParser, extra=()) -> None:
    p.add_argument("--design", choices=DESIGN_KINDS + tuple(extra),
                   help="phase profile design (default: from config, else uniform)")
    p.add_argument("--theta-des", type=float, help="desired elevation for steering designs, degrees")
    p.add_argument("--phi-des", type=float, help="desired azimuth for steering designs, degrees")
    p.add_argument("--profile", help="phase matrix CSV for --design file")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write results to this file instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="output format (default csv; text for gain/boundary/power-consumption)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help=f"seed for randomized output (default {DEFAULT_SEED})")

    parser = _Parser(prog="rispl", description="Path loss modelling for RIS-assisted links.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gain", parents=[common], help="antenna gain of a cos^alpha pattern")
    p.add_argument("--alpha", type=float, required=True, help="pattern exponent")
    p.add_argument("--numeric", action="store_true", help="integrate the pattern instead of 2(alpha+1)")
    p.set_defaults(func=cmd_gain)

    p = sub.add_parser("boundary", parents=[common], help="near/far field boundaries")
    _scenario_flags(p)
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("power", parents=[common], help="received power of one link")
    _scenario_flags(p)
    _design_flags(p)
    p.add_argument("--regime", action="append", choices=REGIMES,
                   help="model to evaluate; repeat for several (default general)")
    p.add_argument("--p-t", type=float, default=1.0, help="transmit power in watts (default 1)")
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("phase-design", parents=[common], help="print a phase profile matrix")
    _scenario_flags(p)
    _design_flags(p, extra=("random",))
    p.set_defaults(func=cmd_phase_design)

    p = sub.add_parser("sweep", parents=[common], help="distance sweep")
    _scenario_flags(p)
    _design_flags(p)
    p.add_argument("--mode", choices=[m for m in SWEEP_MODES if m != "angular_heatmap"])
    p.add_argument("--start", type=float, help="first distance, m")
    p.add_argument("--stop", type=float, help="last distance, m")
    p.add_argument("--step", type=float, help="distance step, m")
    p.add_argument("--regime", action="append", choices=REGIMES, help="repeat for several")
    p.add_argument("--p-t", type=float, help="transmit power in watts")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("heatmap", parents=[common], help="received power over Rx directions")
    _scenario_flags(p)
    _design_flags(p)
    p.add_argument("--resolution", type=float, help="grid step in degrees (default 1)")
    p.add_argument("--p-t", type=float, help="transmit power in watts")
    p.set_defaults(func=cmd_heatmap)

    p = sub.add_parser("compare", parents=[common], help="residuals of measurements against the model")
    _scenario_flags(p, link=True)
    _design_flags(p)
    p.add_argument("--measurements", required=True, help="CSV with header d1_m,d2_m,pr_dbm,tag")
    p.add_argument("--regime", action="append", choices=REGIMES, help="model regime (first is used)")
    p.add_argument("--p-t", type=float, help="transmit power in watts")
    p.add_argument("--cal-gain", type=float, help="composite linear calibration gain")
    p.add_argument("--outlier-db", type=float, help="outlier threshold in dB (default 5)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("power-consumption", parents=[common], help="static RIS power draw")
    p.add_argument("--kind", choices=("pin", "varactor"), required=True)
    p.add_argument("--n-on", type=int, required=True, help="cells in the on state")
    p.add_argument("--n-cells", type=int, help="total cells, to validate --n-on")
    p.set_defaults(func=cmd_power_consumption)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.func(args)
        _emit(text, args.out)
    except OSError as exc:
        print(f"rispl: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, ScenarioError, ConfigError, GeometryError, PresetError, ValueError) as exc:
        print(f"rispl: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
