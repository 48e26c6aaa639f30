# Planar antenna patterns: ideal cone and uniform planar array cut
# ********************************************************
import math
import logging
import numpy as np
from dataclasses import dataclass
from functools import cached_property
from typing import Union
from scipy.optimize import brentq

from .enums import PatternKind, NAME_TO_PATTERN
from .errors import DomainError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

#Tolerance on the declared sidelobe level before a warning is emitted (dB)
SIDELOBE_WARN_DB = 3.0
SIDELOBE_GRID    = 20001

def wrap_angle(theta: ArrayLike) -> ArrayLike:
    """Maps angles to (-pi, pi]."""
    out = np.pi - np.mod(np.pi - np.asarray(theta, dtype=np.float64), 2 * np.pi)
    return float(out) if np.isscalar(theta) else out

def array_factor(theta: ArrayLike, elements: int, spacing: float) -> ArrayLike:
    """Normalised linear array factor |AF(theta)|, theta measured from broadside."""
    scalar = np.isscalar(theta)
    psi    = 2 * np.pi * spacing * np.sin(np.asarray(theta, dtype=np.float64))
    n      = np.arange(elements)
    af     = np.abs(np.exp(1j * np.multiply.outer(psi, n)).mean(axis=-1))
    return float(af) if scalar else af

###################################################################################################################################
@dataclass(frozen=True)
class AntennaPattern:
    @property
    def kind(self) -> PatternKind:
        raise NotImplementedError

    @property
    def peak_gain(self) -> float:
        raise NotImplementedError

    @property
    def support_halfwidth(self) -> float:
        #Gain is zero for |theta| beyond this angle
        return math.pi

    def gain(self, theta: ArrayLike) -> ArrayLike:
        raise NotImplementedError

    def metadata(self) -> dict:
        raise NotImplementedError

@dataclass(frozen=True)
class Cone(AntennaPattern):
    phi: float = math.pi / 6

    def __post_init__(self):
        if(not (0 < self.phi <= 2 * math.pi)):
            raise DomainError("Cone beamwidth must lie in (0, 2pi], got " + str(self.phi))

    @property
    def kind(self) -> PatternKind:
        return PatternKind.CONE

    @property
    def peak_gain(self) -> float:
        return 4 * math.pi / self.phi ** 2

    @property
    def support_halfwidth(self) -> float:
        return min(self.phi / 2, math.pi)

    def gain(self, theta: ArrayLike) -> ArrayLike:
        scalar = np.isscalar(theta)
        inside = np.abs(wrap_angle(np.asarray(theta, dtype=np.float64))) <= self.phi / 2
        out    = np.where(inside, self.peak_gain, 0.0)
        return float(out) if scalar else out

    def metadata(self) -> dict:
        return {"pattern": "cone", "phi": self.phi, "peak_gain": self.peak_gain}

@dataclass(frozen=True)
class PlanarArray(AntennaPattern):
    """Azimuth cut through boresight of an N x N uniform array of isotropic elements.

    The vertical columns add coherently in the horizontal plane, so the cut is the
    N-element linear array factor. With `back_baffled` the array radiates into the
    front half plane only. The peak gain is that of a cone with the measured
    half-power beamwidth, 4 pi / hpbw^2.
    """
    elements_per_side:   int   = 4
    spacing_wavelengths: float = 0.5
    sidelobe_floor_db:   float = -10.0
    back_baffled:        bool  = True

    def __post_init__(self):
        if(self.elements_per_side < 2):
            raise DomainError("A planar array needs at least 2 elements per side.")
        if(self.spacing_wavelengths <= 0):
            raise DomainError("Element spacing must be > 0.")
        self.hpbw
        measured = self.sidelobe_level_db
        if(abs(measured - self.sidelobe_floor_db) > SIDELOBE_WARN_DB):
            logger.warning("Measured sidelobe level %.2f dB differs from the declared %.2f dB.", measured, self.sidelobe_floor_db)

    @property
    def kind(self) -> PatternKind:
        return PatternKind.PLANAR_ARRAY

    @property
    def first_null(self) -> float:
        return math.asin(min(1.0, 1.0 / (self.elements_per_side * self.spacing_wavelengths)))

    @cached_property
    def hpbw(self) -> float:
        f  = lambda t: array_factor(t, self.elements_per_side, self.spacing_wavelengths) ** 2 - 0.5
        if(f(self.first_null) >= 0):
            raise DomainError("Array factor of %d elements at %g wavelengths never falls to half power; widen the spacing or add elements."
                              % (self.elements_per_side, self.spacing_wavelengths))
        th = brentq(f, 0.0, self.first_null, xtol=1e-14)
        return 2 * th

    @cached_property
    def sidelobe_level_db(self) -> float:
        top   = math.pi / 2
        theta = np.linspace(self.first_null, top, SIDELOBE_GRID)
        peak  = np.max(array_factor(theta, self.elements_per_side, self.spacing_wavelengths) ** 2)
        return 10 * math.log10(max(peak, 1e-300))

    @property
    def peak_gain(self) -> float:
        return 4 * math.pi / self.hpbw ** 2

    @property
    def support_halfwidth(self) -> float:
        return math.pi / 2 if self.back_baffled else math.pi

    def gain(self, theta: ArrayLike) -> ArrayLike:
        scalar = np.isscalar(theta)
        theta  = wrap_angle(np.asarray(theta, dtype=np.float64))
        out    = self.peak_gain * array_factor(theta, self.elements_per_side, self.spacing_wavelengths) ** 2
        if(self.back_baffled):
            out = np.where(np.abs(theta) <= math.pi / 2, out, 0.0)
        return float(out) if scalar else out

    def metadata(self) -> dict:
        return {"pattern": "planar_array",
                "elements_per_side": self.elements_per_side,
                "spacing_wavelengths": self.spacing_wavelengths,
                "back_baffled": self.back_baffled,
                "peak_gain": self.peak_gain,
                "hpbw_deg": math.degrees(self.hpbw),
                "sidelobe_declared_db": self.sidelobe_floor_db,
                "sidelobe_measured_db": self.sidelobe_level_db,
                }

###################################################################################################################################
def make_pattern(kind: Union[str, PatternKind], phi: float = math.pi / 6) -> AntennaPattern:
    if(not isinstance(kind, PatternKind)):
        if(str(kind).lower() not in NAME_TO_PATTERN):
            raise DomainError("Unknown antenna pattern '" + str(kind) + "'.")
        kind = NAME_TO_PATTERN[str(kind).lower()]
    if(kind == PatternKind.CONE):
        return Cone(phi)
    return PlanarArray()

def gain(pattern: AntennaPattern, theta: ArrayLike) -> ArrayLike:
    return pattern.gain(theta)

def aligned_link_gain(tx_boresight: ArrayLike, rx_boresight: ArrayLike, tx_pos, rx_pos, pattern: AntennaPattern) -> ArrayLike:
    """G_t * G_r for the link tx -> rx, both patterns evaluated off their boresights.

    Positions are (..., 2) arrays in metres; all arguments broadcast.
    """
    tx_pos, rx_pos = np.asarray(tx_pos, dtype=np.float64), np.asarray(rx_pos, dtype=np.float64)
    delta = rx_pos - tx_pos
    if(np.any(np.hypot(delta[..., 0], delta[..., 1]) == 0)):
        raise DomainError("Link endpoints coincide.")
    towards_rx = np.arctan2(delta[..., 1], delta[..., 0])
    g_t = pattern.gain(towards_rx - tx_boresight)
    g_r = pattern.gain(towards_rx + np.pi - rx_boresight)
    out = g_t * g_r
    return float(out) if np.ndim(out) == 0 else out

def pattern_table(pattern: AntennaPattern, points: int = 721) -> list:
    """Rows of (theta [rad], gain [linear], gain [dBi]) over (-pi, pi]."""
    theta = np.linspace(-np.pi, np.pi, points)
    g     = pattern.gain(theta)
    with np.errstate(divide='ignore'):
        g_db = 10 * np.log10(g)
    return [(float(t), float(x), float(y)) for t, x, y in zip(theta, g, g_db)]
