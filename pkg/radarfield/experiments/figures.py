# Figure sweeps and custom sweeps
# ********************************************************
import math
import time
import logging
import numpy as np
from datetime import datetime, timezone
from dataclasses import dataclass, replace
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

from ..enums import Axis, Scale, Method, PatternKind, Statistic, Fading, AXIS_TO_FIELD
from ..params import RadarParams, NoiseParams
from ..antenna import make_pattern
from ..errors import ValidationError
from ..helper import MmWaveNoFading, SubSixRayleigh, NoiseAppendix
from .. import analytic
from ..montecarlo import (MC_BUDGET, get_budget, Streams, slot_quantile, required_samples, collect_interference,
                          calibrate_threshold, estimate_pd, estimate_dm)
from .core import SweepSpec, SweepResult, split_flat, parse_methods, parse_pattern

logger = logging.getLogger(__name__)

MC_METHODS  = (Method.MC_AGGREGATE, Method.MC_STRONGEST)
METHOD_CODE = {Method.ANALYTIC: 0, Method.MC_AGGREGATE: 1, Method.MC_STRONGEST: 2}

@dataclass(frozen=True)
class Family:
    """One curve of a figure: parameters held fixed while the axis varies."""
    name:          str
    params:        RadarParams
    methods:       Tuple[Method, ...]
    pattern:       PatternKind = PatternKind.CONE
    noise:         Optional[NoiseParams] = None
    noise_only:    bool = False
    distance:      Optional[float] = None
    fixed_pattern: bool = False

    def allowed(self) -> Tuple[Method, ...]:
        #Analytic columns always use the cone model, whatever the simulated pattern
        if(self.noise_only):
            return (Method.ANALYTIC,)
        return (Method.ANALYTIC,) + MC_METHODS

    def prefix(self) -> str:
        return self.name + "." if self.name else ""

    def to_dict(self) -> dict:
        return {"params": self.params.to_dict(), "noise": None if self.noise is None else self.noise.to_dict(),
                "methods": [m.value for m in self.methods], "pattern": self.pattern.name.lower(),
                "noise_only": self.noise_only, "distance": self.distance}

###################################################################################################################################
# Point evaluation
###################################################################################################################################
def _map(fct, items: list) -> list:
    #Analytic points run concurrently; map keeps the axis order
    if(MC_BUDGET.WORKERS > 1 and len(items) > 1):
        with ThreadPoolExecutor(max_workers=MC_BUDGET.WORKERS) as pool:
            return list(pool.map(fct, items))
    return [fct(item) for item in items]

def _point_params(spec: SweepSpec, fam: Family, x: float) -> RadarParams:
    name = AXIS_TO_FIELD[spec.axis]
    return fam.params if name is None else fam.params.replace(**{name: float(x)})

def _analytic_point(spec: SweepSpec, fam: Family, x: float) -> float:
    p = _point_params(spec, fam, x)
    if(spec.axis == Axis.D):
        return analytic.pd(x, p)
    if(spec.axis == Axis.PFA):
        return analytic.pd(fam.distance, p)
    if(fam.noise_only):
        return analytic.max_range_noise_only(p, fam.noise)
    if(fam.noise is not None):
        return analytic.max_range_with_noise(p, fam.noise)
    if(p.fading == Fading.NO_FADING):
        return analytic.max_range_nofading(p)
    return analytic.range_at_pd(spec.level, p)

def _calibration_size(spec: SweepSpec, params: List[RadarParams]) -> int:
    n      = spec.calibration_samples or MC_BUDGET.CALIBRATION_SAMPLES
    needed = max(required_samples(slot_quantile(p.pfa, p.M)) for p in params)
    if(needed > n):
        logger.warning("Raising the calibration budget from %d to %d samples for P_fa = %s.", n, needed,
                       min(p.pfa for p in params))
    return max(n, needed)

def _mc_column(spec: SweepSpec, fam: Family, method: Method, values: np.ndarray, streams: Streams) -> list:
    statistic = Statistic.STRONGEST if method == Method.MC_STRONGEST else Statistic.AGGREGATE
    trials    = spec.trials or MC_BUDGET.DETECTION_TRIALS
    params    = [_point_params(spec, fam, x) for x in values]

    if(spec.axis in (Axis.D, Axis.PFA)):
        #The interference law does not depend on d or P_fa: calibrate once per family
        p0      = fam.params
        pattern = make_pattern(fam.pattern, p0.phi)
        dist    = collect_interference(p0, pattern, _calibration_size(spec, params), streams.child(0),
                                       radius=spec.radius, noise=fam.noise).select(statistic)

        def point(job):
            i, x = job
            p     = params[i]
            theta = calibrate_threshold(dist, p)
            d     = x if spec.axis == Axis.D else fam.distance
            return estimate_pd(d, theta, p, pattern, trials, streams.child(i + 1), statistic=statistic,
                               radius=spec.radius, noise=fam.noise)
    else:
        def point(job):
            i, x    = job
            p       = params[i]
            pattern = make_pattern(fam.pattern, p.phi)
            ps      = streams.child(i + 1)
            dist    = collect_interference(p, pattern, _calibration_size(spec, [p]), ps, radius=spec.radius,
                                           noise=fam.noise).select(statistic)
            theta   = calibrate_threshold(dist, p)
            return estimate_dm(theta, p, pattern, ps, level=spec.level, trials=trials, statistic=statistic,
                               radius=spec.radius, noise=fam.noise)

    #Monte Carlo points run in turn, their chunks share the worker pool
    return [point(job) for job in enumerate(values)]

def _check_family(spec: SweepSpec, fam: Family):
    if(spec.axis in (Axis.D, Axis.PFA) and fam.noise is not None and Method.ANALYTIC in fam.methods):
        raise ValidationError("No closed-form P_d with receiver noise; drop the analytic method", ["noise", "methods"])
    if(spec.axis == Axis.PFA and fam.distance is None):
        raise ValidationError("A P_fa sweep needs a target distance", ["distance"])
    if(fam.noise is not None and not fam.noise_only and fam.params.fading == Fading.RAYLEIGH and Method.ANALYTIC in fam.methods):
        raise ValidationError("Noise-limited ranges are closed-form without fading only", ["noise", "fading"])
    extra = [m.value for m in fam.methods if m not in fam.allowed()]
    if(extra):
        raise ValidationError("Methods not available for family '" + fam.name + "'", ["methods"])

###################################################################################################################################
# Sweeps
###################################################################################################################################
def analytic_gap(reference: List[float], estimates: list) -> dict:
    """Largest distance between a closed-form column and a Monte Carlo column, and how often it leaves the CI."""
    diff = [abs(e.value - r) for r, e in zip(reference, estimates)]
    rel  = [d / abs(r) for d, r in zip(diff, reference) if r != 0]
    return {"max_abs": max(diff), "max_rel": max(rel) if rel else None,
            "outside_ci": sum(not e.contains(r) for r, e in zip(reference, estimates)), "points": len(diff)}

def sweep(spec: SweepSpec, families: List[Family], fig_id: int = 0, non_reference: Optional[List[str]] = None) -> SweepResult:
    """Evaluate every family over the spec's axis.

    Substreams are keyed by (figure, family, method, point) under the spec seed,
    so the table does not depend on the worker count.
    """
    from .. import __version__
    started = datetime.now(timezone.utc)
    tic     = time.perf_counter()
    values  = spec.axis_values()
    root    = Streams(spec.seed)

    columns = [spec.axis.value]
    data    = []
    gaps    = {}
    for f_idx, fam in enumerate(families):
        _check_family(spec, fam)
        reference = None
        for method in fam.methods:
            name = fam.prefix() + method.value
            logger.info("Sweeping %s over %d %s values", name, len(values), spec.axis.value)
            if(method == Method.ANALYTIC):
                columns.append(name)
                reference = _map(lambda x: _analytic_point(spec, fam, x), list(values))
                data.append(reference)
            else:
                est = _mc_column(spec, fam, method, values, root.child(fig_id, f_idx, METHOD_CODE[method]))
                columns += [name, name + "_ci_low", name + "_ci_high"]
                data += [[e.value for e in est], [e.ci_low for e in est], [e.ci_high for e in est]]
                if(reference is not None):
                    gaps[name] = analytic_gap(reference, est)

    rows   = [tuple([float(x)] + [col[i] for col in data]) for i, x in enumerate(values)]
    budget = {k: v for k, v in get_budget().items() if k != "WORKERS"}
    meta   = {"tool": "radarfield", "version": __version__, "figure": spec.figure, "quantity": "pd" if spec.yields_pd else "dm",
              "spec": spec.to_dict(), "families": {fam.name: fam.to_dict() for fam in families},
              "trials": spec.trials or MC_BUDGET.DETECTION_TRIALS,
              "calibration_samples": spec.calibration_samples or MC_BUDGET.CALIBRATION_SAMPLES,
              "budget": budget, "analytic_gap": gaps, "non_reference_defaults": list(non_reference or []),
              "timestamp": {"started": started.isoformat(), "runtime_s": time.perf_counter() - tic}}
    return SweepResult(columns=columns, rows=rows, metadata=meta)

def run_custom(spec: SweepSpec) -> SweepResult:
    fam = Family("", spec.params, spec.methods, pattern=spec.pattern, noise=spec.noise, distance=spec.distance)
    return sweep(spec, [fam], fig_id=0)

def _apply_overrides(figure: str, axis: Axis, axis_defaults: dict, families: List[Family], overrides: Optional[dict]):
    """Layer run overrides (flat or nested) over a figure's defaults."""
    flat = split_flat(dict(overrides or {}))
    if("distance" in flat):
        raise ValidationError("Figure families fix their own target distances", ["distance"])

    params  = flat.pop("params", None)
    noise   = flat.pop("noise", None)
    methods = parse_methods(flat.pop("methods")) if "methods" in flat else None
    pattern = parse_pattern(flat.pop("pattern")) if "pattern" in flat else None
    flat.pop("output", None)

    out = []
    for fam in families:
        if(params):
            fam = replace(fam, params=fam.params.replace(**params))
        if(noise and fam.noise is not None):
            fam = replace(fam, noise=NoiseParams.from_dict({**fam.noise.to_dict(), **noise}))
        if(pattern is not None and not fam.fixed_pattern):
            fam = replace(fam, pattern=pattern)
        if(methods is not None):
            fam = replace(fam, methods=tuple(m for m in methods if m in fam.allowed()))
        if(fam.methods):
            out.append(fam)
    if(not out):
        raise ValidationError("No family supports the requested methods", ["methods"])

    spec_args = {**_spec_json(axis_defaults), "figure": figure, "params": out[0].params.to_dict()}
    spec_args.update(flat)
    return SweepSpec.from_dict({"axis": axis.value, **spec_args}), out

def _spec_json(args: dict) -> dict:
    out = {}
    for key, value in args.items():
        if(key in ("start", "stop")):
            continue
        out[key] = value.value if isinstance(value, Scale) else value
    if("start" in args):
        out["range"] = [args["start"], args["stop"]]
    return out

###################################################################################################################################
# Figures
###################################################################################################################################
def run_fig1(overrides: Optional[dict] = None) -> SweepResult:
    """P_d vs distance: alpha = 2 limit without fading at 60 GHz, alpha = 3 and 4 under Rayleigh fading at 2.4 GHz."""
    methods  = (Method.ANALYTIC, Method.MC_AGGREGATE)
    families = [Family("nofading_alpha2", MmWaveNoFading().params(), methods),
                Family("rayleigh_alpha3", SubSixRayleigh(alpha=3.0).params(), methods),
                Family("rayleigh_alpha4", SubSixRayleigh(alpha=4.0).params(), methods)]
    spec, families = _apply_overrides("1", Axis.D, {"start": 1.0, "stop": 60.0, "points": 60, "scale": Scale.LINEAR},
                                      families, overrides)
    return sweep(spec, families, fig_id=1)

def run_fig2(overrides: Optional[dict] = None) -> SweepResult:
    """d_m vs density without fading for several beamwidths, plus the 4x4 planar array at pi/6."""
    methods  = (Method.ANALYTIC, Method.MC_AGGREGATE)
    families = [Family("cone_phi%d" % round(math.degrees(phi)), MmWaveNoFading(phi=phi).params(), methods)
                for phi in (2 * math.pi, math.pi / 3, math.pi / 6)]
    families.append(Family("array_phi30", MmWaveNoFading().params(), (Method.MC_AGGREGATE,),
                           pattern=PatternKind.PLANAR_ARRAY, fixed_pattern=True))
    spec, families = _apply_overrides("2", Axis.LAMBDA, {"start": 1e-6, "stop": 1e-3, "points": 7, "scale": Scale.LOG},
                                      families, overrides)
    return sweep(spec, families, fig_id=2, non_reference=["cone_phi360.phi", "cone_phi60.phi"])

def run_fig3(overrides: Optional[dict] = None) -> SweepResult:
    """d_m vs beamwidth at density 1e-4 for three false-alarm targets."""
    families = [Family("pfa_0.1", MmWaveNoFading(pfa=0.1).params(), (Method.ANALYTIC, Method.MC_AGGREGATE)),
                #MC calibration at small P_fa needs 100 / (1 - q) samples, about 1e6 and 1e7 here
                Family("pfa_0.01", MmWaveNoFading(pfa=0.01).params(), (Method.ANALYTIC,)),
                Family("pfa_0.001", MmWaveNoFading(pfa=0.001).params(), (Method.ANALYTIC,))]
    spec, families = _apply_overrides("3", Axis.PHI, {"start": math.pi / 96, "stop": math.pi, "points": 12, "scale": Scale.LOG},
                                      families, overrides)
    return sweep(spec, families, fig_id=3, non_reference=["pfa_0.1.pfa", "pfa_0.01.pfa", "pfa_0.001.pfa"])

def run_fig4(overrides: Optional[dict] = None) -> SweepResult:
    """ROC: P_d vs P_fa under Rayleigh fading at alpha = 3, 2.4 GHz."""
    families = [Family("lambda_%g_d%g" % (lam, d), SubSixRayleigh(alpha=3.0, density=lam).params(), (Method.ANALYTIC,), distance=d)
                for lam in (1e-5, 1e-4) for d in (15.0, 30.0)]
    spec, families = _apply_overrides("4", Axis.PFA, {"start": 1e-4, "stop": 0.99, "points": 25, "scale": Scale.LOG},
                                      families, overrides)
    return sweep(spec, families, fig_id=4, non_reference=[fam.name + ".distance" for fam in families])

def run_fig5(overrides: Optional[dict] = None) -> SweepResult:
    """d_m vs density: interference only, noise plus interference, and the noise-only level."""
    preset   = NoiseAppendix()
    p, noise = preset.params(), preset.noise()
    families = [Family("interference", p, (Method.ANALYTIC,)),
                Family("noise_interference", p, (Method.ANALYTIC,), noise=noise),
                Family("noise_only", p, (Method.ANALYTIC,), noise=noise, noise_only=True)]
    spec, families = _apply_overrides("5", Axis.LAMBDA, {"start": 1e-10, "stop": 1e-2, "points": 17, "scale": Scale.LOG},
                                      families, overrides)
    return sweep(spec, families, fig_id=5)

FIGURES = {1: run_fig1, 2: run_fig2, 3: run_fig3, 4: run_fig4, 5: run_fig5}

def run_figure(number: int, overrides: Optional[dict] = None) -> SweepResult:
    if(number not in FIGURES):
        raise ValidationError("Unknown figure " + str(number), ["figure"])
    return FIGURES[number](overrides)
