# Monte Carlo budgets and numeric knobs
# ********************************************************
import os
from ..errors import ValidationError

class MC_BUDGET:
	CALIBRATION_SAMPLES  = 100_000
	DETECTION_TRIALS     = 10_000
	CHUNK_SAMPLES        = 1024
	MAX_POINTS_PER_CHUNK = 2_000_000
	POINT_CAP            = 1e8
	WORKERS              = os.cpu_count() or 1
	WINDOW_EPSILON       = 1e-3
	WINDOW_SPACINGS      = 10.0
	CONFIDENCE           = 0.99
	BISECTION_RTOL       = 0.01
	PD_LEVEL             = 0.5

def get_budget() -> dict:
	return {key: getattr(MC_BUDGET, key) for key in vars(MC_BUDGET) if key.isupper()}

def set_budget(**kwargs):
	unknown = [key for key in kwargs if not hasattr(MC_BUDGET, key.upper())]
	if(unknown):
		raise ValidationError("Unknown Monte Carlo budget keys", unknown)

	for key in kwargs:
		setattr(MC_BUDGET, key.upper(), kwargs[key])

	if(MC_BUDGET.WORKERS < 1):
		raise ValidationError("WORKERS must be >= 1", ["workers"])
