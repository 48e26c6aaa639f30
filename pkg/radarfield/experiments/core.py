# Sweep specifications, results and the layered experiment configuration
# ********************************************************
import io
import os
import csv
import json
import math
import logging
import threading
import numpy as np
from dataclasses import dataclass, field, fields
from typing import Optional, Tuple, List

from ..enums import Axis, Scale, Method, PatternKind, NAME_TO_PATTERN, AXIS_TO_FIELD, PD_AXES
from ..params import RadarParams, NoiseParams, dbm_to_watt
from ..errors import ValidationError, DomainError

FILE_LOCK = threading.Lock()

logger = logging.getLogger(__name__)

OUTPUT_DIR_ENV = "RADARFIELD_OUTPUT_DIR"
CONFIG_CACHE   = {}

RADAR_KEYS = {f.name for f in fields(RadarParams)}
NOISE_KEYS = {f.name for f in fields(NoiseParams)}

#Keys accepted at the boundary in other units: key -> (field, conversion)
UNIT_KEYS = {
    "pt_dbm":        ("pt", dbm_to_watt),
    "freq_ghz":      ("freq", lambda x: x * 1e9),
    "bandwidth_mhz": ("bandwidth", lambda x: x * 1e6),
}

#Run-level keys of a figure override / flat config file
RUN_KEYS = {"seed", "trials", "calibration_samples", "pattern", "methods", "points", "range", "scale",
            "values", "radius", "level", "distance", "output"}

###################################################################################################################################
# Layered configuration
###################################################################################################################################
def output_dir() -> str:
    return os.environ.get(OUTPUT_DIR_ENV, ".")

def get_config() -> dict:
    return dict(CONFIG_CACHE)

def load_config(filename: str, print_error: bool = True, overwrite: bool = False) -> bool:
    """Merge a flat JSON key-value file into the process-wide config."""
    global CONFIG_CACHE
    if(filename is None):
        return False
    try:
        with FILE_LOCK, open(filename, 'r') as json_file:
            config = json.load(json_file)
        if(not isinstance(config, dict)):
            raise ValueError("expected a flat JSON object")
        if(overwrite):
            CONFIG_CACHE = dict(config)
        else:
            CONFIG_CACHE.update(config)
    except Exception as e:
        if(print_error):
            logger.error(f"Failed to load the config file '{filename}': {e}")
        return False
    return True

def cache_config(filename: str):
    with FILE_LOCK, open(filename, "w") as json_file:
        json.dump(CONFIG_CACHE, json_file, indent=2, sort_keys=True)

def reset_config():
    global CONFIG_CACHE
    CONFIG_CACHE = {}

def convert_units(data: dict) -> dict:
    out = {}
    for key, value in data.items():
        if(key in UNIT_KEYS):
            name, conv = UNIT_KEYS[key]
            if(name in data):
                raise ValidationError("Conflicting unit keys", [key, name])
            out[name] = conv(float(value))
        else:
            out[key] = value
    return out

def split_flat(flat: dict) -> dict:
    """Route a flat key-value mapping into run keys, `params` and `noise`.

    Radar and noise fields may also be given in nested `params` / `noise`
    objects; unknown keys raise a ValidationError listing them.
    """
    flat    = convert_units(flat)
    out     = {}
    params  = convert_units(dict(flat.get("params") or {}))
    noise   = flat.get("noise")
    noise   = None if noise is None else convert_units(dict(noise))
    unknown = []
    for key, value in flat.items():
        if(key in ("params", "noise")):
            continue
        if(key in RUN_KEYS):
            out[key] = value
        elif(key in RADAR_KEYS):
            params[key] = value
        elif(key in NOISE_KEYS):
            noise = dict(noise or {})
            noise[key] = value
        else:
            unknown.append(key)
    if(unknown):
        raise ValidationError("Unknown configuration keys", unknown)
    bad = [key for key in params if key not in RADAR_KEYS]
    if(noise is not None):
        bad += ["noise." + key for key in noise if key not in NOISE_KEYS]
    if(bad):
        raise ValidationError("Unknown parameter keys", bad)
    if(params):
        out["params"] = params
    if(noise is not None):
        out["noise"] = noise
    return out

###################################################################################################################################
# Sweep specification
###################################################################################################################################
def parse_pattern(value) -> PatternKind:
    if(isinstance(value, PatternKind)):
        return value
    if(str(value).lower() not in NAME_TO_PATTERN):
        raise ValidationError("Unknown antenna pattern", ["pattern"])
    return NAME_TO_PATTERN[str(value).lower()]

def parse_methods(values) -> Tuple[Method, ...]:
    if(isinstance(values, (str, Method))):
        values = [values]
    try:
        out = tuple(Method(v) if not isinstance(v, Method) else v for v in values)
    except ValueError:
        raise ValidationError("Unknown method in", ["methods"])
    if(len(out) == 0):
        raise ValidationError("At least one method is required", ["methods"])
    return tuple(dict.fromkeys(out))

@dataclass(frozen=True)
class SweepSpec:
    """A single-axis sweep: every other parameter held at `params` / `noise`.

    d and pfa axes produce P_d (pfa sweeps at the fixed `distance`); lambda, phi
    and alpha axes produce d_m at the P_d `level`.
    """
    axis:                Axis
    start:               float = 0.0
    stop:                float = 0.0
    points:              int   = 1
    scale:               Scale = Scale.LINEAR
    values:              Optional[Tuple[float, ...]] = None
    params:              RadarParams = field(default_factory=RadarParams)
    noise:               Optional[NoiseParams] = None
    methods:             Tuple[Method, ...] = (Method.ANALYTIC,)
    pattern:             PatternKind = PatternKind.CONE
    seed:                int   = 0
    trials:              Optional[int] = None
    calibration_samples: Optional[int] = None
    radius:              Optional[float] = None
    level:               float = 0.5
    distance:            float = 20.0
    output:              Optional[str] = None
    figure:              Optional[str] = None

    def __post_init__(self):
        bad = []
        if(self.values is not None):
            if(len(self.values) == 0):
                bad.append("values")
        else:
            if(int(self.points) != self.points or self.points < 1):
                bad.append("points")
            if(self.points > 1 and not (self.stop > self.start)):
                bad.append("range")
            if(self.scale == Scale.LOG and (self.start <= 0 or self.stop <= 0)):
                bad.append("range")
        if(len(self.methods) == 0):
            bad.append("methods")
        if(not (0 < self.level < 1)):
            bad.append("level")
        if(self.distance <= 0):
            bad.append("distance")
        for key in ("trials", "calibration_samples"):
            if(getattr(self, key) is not None and getattr(self, key) < 1):
                bad.append(key)
        if(self.radius is not None and self.radius <= 0):
            bad.append("radius")
        if(bad):
            raise ValidationError("Invalid sweep specification", set(bad))

    @property
    def yields_pd(self) -> bool:
        return self.axis in PD_AXES

    def axis_values(self) -> np.ndarray:
        if(self.values is not None):
            return np.asarray(self.values, dtype=np.float64)
        if(self.points == 1):
            return np.array([float(self.start)])
        if(self.scale == Scale.LOG):
            return np.geomspace(self.start, self.stop, int(self.points))
        return np.linspace(self.start, self.stop, int(self.points))

    def params_at(self, x: float) -> RadarParams:
        name = AXIS_TO_FIELD[self.axis]
        return self.params if name is None else self.params.replace(**{name: float(x)})

    @classmethod
    def from_dict(cls, data: dict) -> "SweepSpec":
        """Build a spec from its JSON form, collecting every offending key."""
        bad    = []
        kwargs = {}
        try:
            kwargs["axis"] = Axis(str(data["axis"]).lower())
        except (KeyError, ValueError):
            bad.append("axis")
        if(data.get("figure") is not None):
            kwargs["figure"] = str(data["figure"])
        try:
            raw = split_flat({k: v for k, v in data.items() if k not in ("axis", "figure")})
        except ValidationError as e:
            bad.extend(e.keys)
            raw = {}
        return cls._build(kwargs, raw, bad)

    @classmethod
    def _build(cls, kwargs: dict, raw: dict, bad: list) -> "SweepSpec":
        if("range" in raw):
            try:
                start, stop = raw["range"]
                kwargs["start"], kwargs["stop"] = float(start), float(stop)
            except Exception:
                bad.append("range")
        if("scale" in raw):
            try:
                kwargs["scale"] = Scale(str(raw["scale"]).lower())
            except ValueError:
                bad.append("scale")
        if("values" in raw):
            try:
                kwargs["values"] = tuple(float(v) for v in raw["values"])
            except Exception:
                bad.append("values")
        for key, conv in (("points", int), ("seed", int), ("trials", int), ("calibration_samples", int),
                          ("radius", float), ("level", float), ("distance", float), ("output", str)):
            if(key in raw and raw[key] is not None):
                try:
                    kwargs[key] = conv(raw[key])
                except Exception:
                    bad.append(key)
        for key, conv in (("methods", parse_methods), ("pattern", parse_pattern)):
            if(key in raw):
                try:
                    kwargs[key] = conv(raw[key])
                except ValidationError:
                    bad.append(key)
        try:
            kwargs["params"] = RadarParams.from_dict(raw.get("params", {}))
        except (DomainError, TypeError, ValueError):
            bad.append("params")
        if(raw.get("noise") is not None):
            try:
                kwargs["noise"] = NoiseParams.from_dict(raw["noise"])
            except (DomainError, TypeError, ValueError):
                bad.append("noise")
        if(bad):
            raise ValidationError("Invalid sweep specification", set(bad))
        return cls(**kwargs)

    def to_dict(self) -> dict:
        return {"axis": self.axis.value, "values": [float(x) for x in self.axis_values()], "params": self.params.to_dict(),
                "noise": None if self.noise is None else self.noise.to_dict(), "methods": [m.value for m in self.methods],
                "pattern": self.pattern.name.lower(), "seed": self.seed, "trials": self.trials,
                "calibration_samples": self.calibration_samples, "radius": self.radius, "level": self.level,
                "distance": self.distance}

###################################################################################################################################
# Sweep results
###################################################################################################################################
def _fmt(x) -> str:
    if(x is None):
        return ""
    if(isinstance(x, (int, np.integer))):
        return str(int(x))
    return "%.17g" % float(x)

@dataclass(eq=False)
class SweepResult:
    """Tabular sweep output: one row per axis value, fixed column order.

    `metadata` carries everything needed to re-run the sweep; run-dependent
    values are confined to its `timestamp` entry.
    """
    columns:  List[str]
    rows:     List[tuple]
    metadata: dict

    def __post_init__(self):
        for row in self.rows:
            if(len(row) != len(self.columns)):
                raise ValidationError("Row width does not match the columns", ["rows"])

    def column(self, name: str) -> np.ndarray:
        idx = self.columns.index(name)
        return np.array([np.nan if row[idx] is None else row[idx] for row in self.rows], dtype=np.float64)

    def to_csv(self, path: Optional[str] = None) -> str:
        buf = io.StringIO()
        buf.write("# " + json.dumps(self.metadata, sort_keys=True) + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_fmt(x) for x in row])
        text = buf.getvalue()
        if(path is not None):
            _write(path, text)
        return text

    def to_json(self, path: Optional[str] = None) -> str:
        rows = [[None if (x is None or (isinstance(x, float) and math.isnan(x))) else x for x in row] for row in self.rows]
        text = json.dumps({"metadata": self.metadata, "columns": self.columns, "rows": rows}, sort_keys=True, indent=1)
        if(path is not None):
            _write(path, text)
        return text

    def save(self, path: str) -> Tuple[str, str]:
        """Write `path` as CSV and the same table as JSON next to it."""
        json_path = os.path.splitext(path)[0] + ".json"
        self.to_csv(path)
        self.to_json(json_path)
        logger.info("Wrote %s and %s", path, json_path)
        return path, json_path

def _write(path: str, text: str):
    folder = os.path.dirname(os.path.abspath(path))
    os.makedirs(folder, exist_ok=True)
    with open(path, "w") as out:
        out.write(text)

def read_csv(path: str) -> Tuple[dict, List[str], List[list]]:
    """Inverse of SweepResult.to_csv: (metadata, columns, rows as floats or None)."""
    with open(path, "r") as src:
        header = src.readline()
        if(not header.startswith("# ")):
            raise ValidationError("Missing metadata header", [path])
        metadata = json.loads(header[2:])
        reader   = csv.reader(src)
        columns  = next(reader)
        rows     = [[float(x) if x != "" else None for x in row] for row in reader]
    return metadata, columns, rows
