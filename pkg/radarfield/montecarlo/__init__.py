from .config import MC_BUDGET, set_budget, get_budget
from .utils import Stream, Streams, wilson_interval, slot_quantile, required_samples
from .engine import (EmpiricalDistribution, Estimate, InterferenceDistributions, collect_interference, calibrate_threshold,
                     estimate_pd, estimate_dm, empirical_false_alarm, ks_distance, draw_slots, resolve_radius,
                     window_sensitivity)

__all__ = ["MC_BUDGET", "set_budget", "get_budget", "Stream", "Streams", "wilson_interval", "slot_quantile", "required_samples",
           "EmpiricalDistribution", "Estimate", "InterferenceDistributions", "collect_interference", "calibrate_threshold",
           "estimate_pd", "estimate_dm", "empirical_false_alarm", "ks_distance", "draw_slots", "resolve_radius", "window_sensitivity"]
