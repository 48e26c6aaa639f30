import math
from dataclasses import dataclass, replace, asdict, fields
from scipy.constants import c as SPEED_OF_LIGHT, k as BOLTZMANN

from .enums import Fading, NAME_TO_FADING
from .errors import DomainError, ValidationError

def dbm_to_watt(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)

def watt_to_dbm(watt: float) -> float:
    return 10.0 * math.log10(watt) + 30.0

def as_fading(value) -> Fading:
    if(isinstance(value, Fading)):
        return value
    try:
        return NAME_TO_FADING[str(value).lower()]
    except KeyError:
        raise DomainError("Unknown fading model '" + str(value) + "'.")

@dataclass(frozen=True)
class RadarParams:
    """Scalar system parameters of the radar network.

    Powers are in watts, frequencies in Hz, angles in radians. `M` is the cycle
    length in slots, so the pulse repetition frequency is delta = 1/M. alpha = 2
    is only accepted with `alpha_limit=True`, in which case the closed forms are
    read as their alpha -> 2+ limits.
    """
    density:     float  = 1e-4
    M:           int    = 100
    phi:         float  = math.pi / 6
    alpha:       float  = 2.0
    pt:          float  = 0.01
    freq:        float  = 60e9
    kappa:       float  = 10.0
    sigma:       float  = 10.0
    pfa:         float  = 0.1
    fading:      Fading = Fading.NO_FADING
    alpha_limit: bool   = True

    def __post_init__(self):
        object.__setattr__(self, "fading", as_fading(self.fading))
        if(int(self.M) != self.M or self.M < 2):
            raise DomainError("M must be an integer >= 2, got " + str(self.M))
        object.__setattr__(self, "M", int(self.M))
        if(not (0 < self.phi <= 2 * math.pi)):
            raise DomainError("phi must lie in (0, 2pi], got " + str(self.phi))
        if(self.density < 0):
            raise DomainError("density must be >= 0, got " + str(self.density))
        if(not (0 < self.pfa < 1)):
            raise DomainError("pfa must lie in (0, 1), got " + str(self.pfa))
        if(self.alpha < 2 or (self.alpha == 2 and not self.alpha_limit)):
            raise DomainError("alpha must be > 2 (alpha = 2 only with alpha_limit), got " + str(self.alpha))
        for name in ("pt", "freq", "kappa", "sigma"):
            if(getattr(self, name) <= 0):
                raise DomainError(name + " must be > 0, got " + str(getattr(self, name)))

    @property
    def delta(self) -> float:
        return 1.0 / self.M

    @property
    def limit_mode(self) -> bool:
        return self.alpha == 2

    @property
    def gain(self) -> float:
        #Boresight gain of the cone pattern, G_m = 4pi / phi^2
        return 4 * math.pi / self.phi ** 2

    @property
    def ell(self) -> float:
        return (SPEED_OF_LIGHT / (4 * math.pi * self.freq)) ** 2

    @property
    def omega(self) -> float:
        return self.pt * self.gain ** 2 * self.ell

    def replace(self, **kwargs) -> "RadarParams":
        return replace(self, **kwargs)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["fading"] = self.fading.name.lower()
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "RadarParams":
        data    = dict(data)
        known   = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if(unknown):
            raise ValidationError("Unknown radar parameters", unknown)
        return cls(**data)

@dataclass(frozen=True)
class DerivedConstants:
    ell:   float
    omega: float
    Omega: float

    def __post_init__(self):
        if(self.ell <= 0 or self.omega <= 0 or self.Omega <= 0):
            raise DomainError("Derived constants must be positive.")

@dataclass(frozen=True)
class NoiseParams:
    """Receiver noise, P_n = k_B T B F (F linear)."""
    temp:         float = 290.0
    bandwidth:    float = 125e6
    noise_figure: float = 10.0

    def __post_init__(self):
        for f in fields(self):
            if(getattr(self, f.name) < 0):
                raise DomainError(f.name + " must be >= 0, got " + str(getattr(self, f.name)))

    @property
    def pn(self) -> float:
        return BOLTZMANN * self.temp * self.bandwidth * self.noise_figure

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "NoiseParams":
        known   = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if(unknown):
            raise ValidationError("Unknown noise parameters", unknown)
        return cls(**data)
