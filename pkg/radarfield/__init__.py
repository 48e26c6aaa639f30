__version__ = "0.1.0"

from .enums import Fading, PatternKind, Statistic, Method, Axis, Scale
from .errors import (RadarFieldError, DomainError, ValidationError, InsufficientSamplesError, NoInterferenceThresholdError,
                     ResourceError, NumericalError)
from .params import RadarParams, NoiseParams, DerivedConstants, dbm_to_watt, watt_to_dbm
from .antenna import AntennaPattern, Cone, PlanarArray, make_pattern, aligned_link_gain
from .field import Scene, InterferenceSample, sample_scene, interference_slot, window_radius
from .helper import MmWaveNoFading, SubSixRayleigh, NoiseAppendix
from . import analytic
from .montecarlo import MC_BUDGET, set_budget, Streams, collect_interference, calibrate_threshold, estimate_pd, estimate_dm
from .experiments import SweepSpec, SweepResult, run_custom, run_figure

from .experiments import core as _core
load_config  = _core.load_config
cache_config = _core.cache_config
reset_config = _core.reset_config
