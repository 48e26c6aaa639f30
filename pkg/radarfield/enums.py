from enum import Enum

class Fading(Enum):
    NO_FADING = 0
    RAYLEIGH  = 1

class PatternKind(Enum):
    CONE          = 0
    PLANAR_ARRAY  = 1

class Statistic(Enum):
    AGGREGATE = 0
    STRONGEST = 1

class Method(Enum):
    ANALYTIC      = "analytic"
    MC_STRONGEST  = "mc_strongest"
    MC_AGGREGATE  = "mc_aggregate"

class Axis(Enum):
    D      = "d"
    LAMBDA = "lambda"
    PHI    = "phi"
    PFA    = "pfa"
    ALPHA  = "alpha"

class Scale(Enum):
    LINEAR = "linear"
    LOG    = "log"

NAME_TO_FADING = {
    "none":      Fading.NO_FADING,
    "nofading":  Fading.NO_FADING,
    "no_fading": Fading.NO_FADING,
    "rayleigh":  Fading.RAYLEIGH,
}

NAME_TO_PATTERN = {
    "cone":         PatternKind.CONE,
    "array":        PatternKind.PLANAR_ARRAY,
    "planar_array": PatternKind.PLANAR_ARRAY,
}

#Axis -> RadarParams field it sweeps (None: not a parameter)
AXIS_TO_FIELD = {
    Axis.D:      None,
    Axis.LAMBDA: "density",
    Axis.PHI:    "phi",
    Axis.PFA:    "pfa",
    Axis.ALPHA:  "alpha",
}

#Axes producing P_d; the others produce d_m
PD_AXES = (Axis.D, Axis.PFA)
