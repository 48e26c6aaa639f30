# Command line: closed forms, figure sweeps, custom sweeps and dumps
# ********************************************************
import os
import csv
import sys
import json
import logging
import argparse
from dataclasses import asdict
from typing import List, Optional

from ..params import RadarParams, NoiseParams, watt_to_dbm
from ..errors import RadarFieldError, ValidationError, EXIT_OK
from ..antenna import make_pattern, pattern_table
from ..field import sample_scene, scene_table, window_radius
from .. import analytic
from ..montecarlo import set_budget, Streams, Stream
from .core import SweepSpec, load_config, get_config, output_dir, split_flat, parse_pattern
from .figures import run_figure, run_custom

logger = logging.getLogger(__name__)

#op -> (fct(params, noise, x), name of the x argument or None, needs noise)
ANALYTIC_OPS = {
    "threshold":            (lambda p, n, x: analytic.detection_threshold(p), None, False),
    "dm":                   (lambda p, n, x: analytic.max_range_nofading(p), None, False),
    "pd":                   (lambda p, n, d: analytic.pd(d, p), "d", False),
    "pd-floor":             (lambda p, n, x: analytic.pd_floor(p), None, False),
    "range-at-pd":          (lambda p, n, level: analytic.range_at_pd(level, p), "level", False),
    "echo-power":           (lambda p, n, d: analytic.echo_power(d, 1.0, p), "d", False),
    "omega-factor":         (lambda p, n, x: analytic.omega_factor(p.alpha, p.fading, p.alpha_limit), None, False),
    "constants":            (lambda p, n, x: asdict(analytic.derived_constants(p)), None, False),
    "cdf":                  (lambda p, n, i: analytic.strongest_cdf(i, p), "i", False),
    "pdf":                  (lambda p, n, i: analytic.strongest_pdf(i, p), "i", False),
    "quantile":             (lambda p, n, u: analytic.strongest_quantile(u, p), "u", False),
    "noise-power":          (lambda p, n, x: analytic.noise_power(n), None, True),
    "cdf-noise":            (lambda p, n, z: analytic.cdf_noise_plus_interference(z, p, n), "z", True),
    "threshold-noise":      (lambda p, n, x: analytic.threshold_with_noise(p, n), None, True),
    "threshold-noise-only": (lambda p, n, x: analytic.threshold_noise_only(p, n), None, True),
    "dm-noise":             (lambda p, n, x: analytic.max_range_with_noise(p, n), None, True),
    "dm-noise-only":        (lambda p, n, x: analytic.max_range_noise_only(p, n), None, True),
}

#Ops whose value is a power in watts, also printed in dBm
POWER_OPS = ("threshold", "echo-power", "quantile", "noise-power", "threshold-noise", "threshold-noise-only")

PARAM_FLAGS = [("density", float), ("M", int), ("phi", float), ("alpha", float), ("pt", float), ("pt_dbm", float),
               ("freq", float), ("freq_ghz", float), ("kappa", float), ("sigma", float), ("pfa", float), ("fading", str)]
NOISE_FLAGS = [("temp", float), ("bandwidth", float), ("bandwidth_mhz", float), ("noise_figure", float)]

###################################################################################################################################
def _add_param_flags(parser: argparse.ArgumentParser, noise: bool = False):
    group = parser.add_argument_group("radar parameters")
    for name, kind in PARAM_FLAGS:
        group.add_argument("--" + name.replace("_", "-"), dest=name, type=kind, default=None)
    group.add_argument("--no-alpha-limit", dest="alpha_limit", action="store_false", default=None,
                       help="reject alpha = 2 instead of reading it as its limit")
    if(noise):
        group = parser.add_argument_group("receiver noise")
        for name, kind in NOISE_FLAGS:
            group.add_argument("--" + name.replace("_", "-"), dest=name, type=kind, default=None)

def _collect(args, names) -> dict:
    return {name: getattr(args, name) for name in names if getattr(args, name, None) is not None}

def _params(args) -> RadarParams:
    flat = _collect(args, [n for n, _ in PARAM_FLAGS] + ["alpha_limit"])
    data = split_flat({**get_config(), **flat})
    return RadarParams.from_dict(data.get("params", {}))

def _noise(args) -> NoiseParams:
    flat = _collect(args, [n for n, _ in NOISE_FLAGS])
    data = split_flat({**get_config(), **flat})
    return NoiseParams.from_dict(data.get("noise") or {})

def _out_path(path: Optional[str], default_name: str) -> str:
    return path if path is not None else os.path.join(output_dir(), default_name)

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="radarfield", description="Interference statistics of planar radar networks.")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    parser.add_argument("--config", default=None, help="flat JSON key-value file layered under the command line flags")
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analytic", help="Evaluate one closed form and print it as JSON.")
    a.add_argument("op", choices=sorted(ANALYTIC_OPS))
    a.add_argument("--d", type=float, default=None, help="target distance [m]")
    a.add_argument("--i", type=float, default=None, help="interference power [W]")
    a.add_argument("--z", type=float, default=None, help="noise plus interference power [W]")
    a.add_argument("--u", type=float, default=None, help="CDF level")
    a.add_argument("--level", type=float, default=None, help="P_d level")
    _add_param_flags(a, noise=True)

    f = sub.add_parser("figure", help="Reproduce one figure as CSV + JSON.")
    f.add_argument("number", type=int, choices=[1, 2, 3, 4, 5])
    f.add_argument("--out", default=None)
    f.add_argument("--seed", type=int, default=None)
    f.add_argument("--trials", type=int, default=None, help="detection trials per point")
    f.add_argument("--calibration-samples", type=int, default=None)
    f.add_argument("--pattern", choices=["cone", "array"], default=None)
    f.add_argument("--methods", nargs="+", default=None, choices=["analytic", "mc_strongest", "mc_aggregate"])
    f.add_argument("--points", type=int, default=None)
    f.add_argument("--workers", type=int, default=None)

    s = sub.add_parser("sweep", help="Run a custom sweep from a JSON spec file.")
    s.add_argument("--spec", required=True)
    s.add_argument("--out", default=None)
    s.add_argument("--workers", type=int, default=None)

    d = sub.add_parser("scene-dump", help="Sample one scene and write it as CSV.")
    d.add_argument("--radius", type=float, default=None, help="window radius [m], defaults to the simulation window")
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--out", default=None)
    _add_param_flags(d)

    g = sub.add_parser("pattern-dump", help="Write an antenna gain-vs-angle table as CSV.")
    g.add_argument("--pattern", choices=["cone", "array"], default="cone")
    g.add_argument("--phi", type=float, default=RadarParams.phi)
    g.add_argument("--points", type=int, default=721)
    g.add_argument("--out", default=None)
    return parser

###################################################################################################################################
def _cmd_analytic(args) -> int:
    fct, extra, needs_noise = ANALYTIC_OPS[args.op]
    p = _params(args)
    x = None
    if(extra is not None):
        x = getattr(args, extra)
        if(x is None):
            raise ValidationError("Operation '" + args.op + "' needs --" + extra, [extra])
    value = fct(p, _noise(args) if needs_noise else None, x)
    out   = {"op": args.op, "value": value if isinstance(value, dict) else float(value), "params": p.to_dict(),
             "pt_dbm": watt_to_dbm(p.pt)}
    if(args.op in POWER_OPS and value > 0):
        out["value_dbm"] = watt_to_dbm(value)
    print(json.dumps(out, sort_keys=True))
    return EXIT_OK

def _cmd_figure(args) -> int:
    if(args.workers is not None):
        set_budget(workers=args.workers)
    cli = {"seed": args.seed, "trials": args.trials, "calibration_samples": args.calibration_samples,
           "pattern": args.pattern, "methods": args.methods, "points": args.points}
    overrides = {**get_config(), **{k: v for k, v in cli.items() if v is not None}}
    result    = run_figure(args.number, overrides)
    result.save(_out_path(args.out or overrides.get("output"), "fig%d.csv" % args.number))
    return EXIT_OK

def _cmd_sweep(args) -> int:
    if(args.workers is not None):
        set_budget(workers=args.workers)
    try:
        with open(args.spec, "r") as src:
            data = json.load(src)
    except (OSError, ValueError) as e:
        raise ValidationError("Cannot read sweep spec '" + args.spec + "' (" + str(e) + ")", ["spec"])
    if(not isinstance(data, dict)):
        raise ValidationError("Sweep spec must be a JSON object", ["spec"])
    spec   = SweepSpec.from_dict({**get_config(), **data})
    result = run_custom(spec)
    result.save(_out_path(args.out or spec.output, "sweep.csv"))
    return EXIT_OK

def _cmd_scene_dump(args) -> int:
    p = _params(args)
    radius = args.radius
    if(radius is None):
        radius = window_radius(p, analytic.detection_threshold(p))
    scene = sample_scene(p, radius, Streams(args.seed).generator(Stream.SCENE))
    meta  = {"params": p.to_dict(), "seed": args.seed, "radius": radius, "count": scene.count}
    _write_table(_out_path(args.out, "scene.csv"), meta, ["x", "y", "boresight", "mark"], scene_table(scene))
    return EXIT_OK

def _cmd_pattern_dump(args) -> int:
    pattern = make_pattern(parse_pattern(args.pattern), args.phi)
    meta    = {"pattern": pattern.kind.name.lower(), **pattern.metadata()}
    _write_table(_out_path(args.out, "pattern.csv"), meta, ["theta", "gain", "gain_db"], pattern_table(pattern, args.points))
    return EXIT_OK

def _write_table(path: str, metadata: dict, columns: List[str], rows: list):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w") as out:
        out.write("# " + json.dumps(metadata, sort_keys=True) + "\n")
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows([["%.17g" % x if isinstance(x, float) else x for x in row] for row in rows])
    logger.info("Wrote %d rows to %s", len(rows), path)

COMMANDS = {"analytic": _cmd_analytic, "figure": _cmd_figure, "sweep": _cmd_sweep,
            "scene-dump": _cmd_scene_dump, "pattern-dump": _cmd_pattern_dump}

def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format="%(levelname)s %(name)s: %(message)s")

    if(args.config is not None and not load_config(args.config)):
        return ValidationError.exit_code
    try:
        return COMMANDS[args.command](args)
    except RadarFieldError as e:
        logger.error(str(e))
        return e.exit_code

if __name__ == "__main__":
    sys.exit(main())
