# Marked Poisson field of pulsed radars around the typical receiver
# ********************************************************
import math
import logging
import numpy as np
from dataclasses import dataclass
from typing import Optional, Tuple

from .enums import Fading
from .params import RadarParams, NoiseParams
from .antenna import AntennaPattern, aligned_link_gain
from .errors import DomainError, ResourceError

logger = logging.getLogger(__name__)

#Largest expected point count a single draw may require
POINT_CAP = 1e8

@dataclass(frozen=True, eq=False)
class Scene:
    """One realisation of the radar field on a disk centred on the typical node.

    positions: (n, 2) metres, boresights: (n,) radians in [0, 2pi),
    marks: (n,) slot offsets in {0..M-1}.
    """
    radius:     float
    positions:  np.ndarray
    boresights: np.ndarray
    marks:      np.ndarray
    params:     RadarParams

    @property
    def count(self) -> int:
        return int(self.marks.shape[0])

@dataclass(frozen=True)
class InterferenceSample:
    aggregate:    float
    strongest:    float
    active_count: int

@dataclass(frozen=True, eq=False)
class SlotBatch:
    """Per-slot interference over n independent fresh scenes."""
    aggregate:    np.ndarray
    strongest:    np.ndarray
    active_count: np.ndarray

    def __len__(self):
        return int(self.aggregate.shape[0])

###################################################################################################################################
def _check_expected(mean: float, max_points: float):
    if(mean > max_points):
        raise ResourceError("Expected point count %.3g exceeds the cap %.3g; shrink the window or raise the cap." % (mean, max_points))

def _fading_draws(p: RadarParams, size: int, rng: np.random.Generator) -> np.ndarray:
    if(p.fading == Fading.RAYLEIGH):
        return rng.exponential(1.0, size)
    return np.ones(size)

def sample_scene(p: RadarParams, radius: float, rng: np.random.Generator, max_points: float = POINT_CAP) -> Scene:
    if(radius <= 0):
        raise DomainError("Window radius must be > 0, got " + str(radius))
    mean = p.density * math.pi * radius ** 2
    _check_expected(mean, max_points)

    count      = int(rng.poisson(mean))
    r          = radius * np.sqrt(rng.random(count))
    angle      = rng.uniform(0.0, 2 * np.pi, count)
    boresights = rng.uniform(0.0, 2 * np.pi, count)
    marks      = rng.integers(0, p.M, count)
    positions  = np.stack([r * np.cos(angle), r * np.sin(angle)], axis=-1)
    return Scene(radius=radius, positions=positions, boresights=boresights, marks=marks, params=p)

def window_terms(p: RadarParams, theta_scale: float, epsilon: float = 1e-3, spacings: float = 10.0) -> Tuple[float, float]:
    """(power criterion radius, spacing floor radius) of the simulation window."""
    if(theta_scale <= 0):
        raise DomainError("theta_scale must be > 0, got " + str(theta_scale))
    r_power = (p.omega / (epsilon * theta_scale)) ** (1 / p.alpha)
    if(p.density == 0):
        return r_power, 0.0
    aligned = p.density * p.delta * p.phi ** 2 / (4 * math.pi ** 2)
    return r_power, spacings / math.sqrt(aligned)

def window_radius(p: RadarParams, theta_scale: float, epsilon: float = 1e-3, spacings: float = 10.0) -> float:
    """Radius beyond which a boresight-aligned interferer stays below epsilon * theta_scale.

    Never smaller than `spacings` mean distances to the nearest aligned active
    interferer.
    """
    r_power, r_floor = window_terms(p, theta_scale, epsilon, spacings)
    logger.debug("Window radius: power criterion %.4g m, spacing floor %.4g m (%s binds).",
                 r_power, r_floor, "power" if r_power >= r_floor else "spacing")
    return max(r_power, r_floor)

def interference_slot(scene: Scene, slot: int, pattern: AntennaPattern, rx_boresight: float, rng: np.random.Generator) -> InterferenceSample:
    """Interference at the origin over one slot, from the nodes transmitting in it.

    Fading is drawn per call, one value per active interferer.
    """
    p = scene.params
    if(not (0 <= slot < p.M)):
        raise DomainError("Slot must lie in [0, M), got " + str(slot))
    active = scene.marks == slot
    if(not np.any(active)):
        return InterferenceSample(0.0, 0.0, 0)

    pos   = scene.positions[active]
    g     = aligned_link_gain(scene.boresights[active], rx_boresight, pos, np.zeros(2), pattern)
    zeta  = _fading_draws(p, pos.shape[0], rng)
    power = p.pt * p.ell * g * zeta * np.hypot(pos[:, 0], pos[:, 1]) ** (-p.alpha)
    return InterferenceSample(float(power.sum()), float(power.max()), int(np.count_nonzero(power)))

def sample_slot_interference(p: RadarParams, pattern: AntennaPattern, radius: float, n: int, rng: np.random.Generator,
                             noise: Optional[NoiseParams] = None, max_points: float = POINT_CAP, inner_radius: float = 0.0) -> SlotBatch:
    """Interference over one listening slot for n independent fresh scenes.

    The nodes active in a given slot form a PPP of intensity lambda * delta. The
    receiver boresight is rotated to 0 and only its nonzero-gain sector is
    populated; transmitter alignment is still decided from the geometry. With
    `noise`, an exponential draw of mean P_n is added to both statistics.
    With `inner_radius` > 0 only the annulus between the two radii is populated.
    """
    if(radius <= 0):
        raise DomainError("Window radius must be > 0, got " + str(radius))
    if(not (0 <= inner_radius < radius)):
        raise DomainError("inner_radius must lie in [0, radius), got " + str(inner_radius))
    if(n < 1):
        raise DomainError("n must be >= 1, got " + str(n))

    half = pattern.support_halfwidth
    mean = p.density * p.delta * half * (radius ** 2 - inner_radius ** 2)
    _check_expected(mean, max_points)

    counts     = rng.poisson(mean, n)
    total      = int(counts.sum())
    r          = np.sqrt(inner_radius ** 2 + (radius ** 2 - inner_radius ** 2) * rng.random(total))
    angle      = rng.uniform(-half, half, total)
    boresights = rng.uniform(0.0, 2 * np.pi, total)
    zeta       = _fading_draws(p, total, rng)

    aggregate    = np.zeros(n)
    strongest    = np.zeros(n)
    active_count = np.zeros(n, dtype=np.int64)
    if(total > 0):
        pos   = np.stack([r * np.cos(angle), r * np.sin(angle)], axis=-1)
        g     = aligned_link_gain(boresights, 0.0, pos, np.zeros(2), pattern)
        power = p.pt * p.ell * g * zeta * r ** (-p.alpha)

        seg          = np.repeat(np.arange(n), counts)
        aggregate    = np.bincount(seg, weights=power, minlength=n)
        active_count = np.bincount(seg, weights=(power > 0), minlength=n).astype(np.int64)
        nonempty     = counts > 0
        starts       = np.cumsum(counts) - counts
        strongest[nonempty] = np.maximum.reduceat(power, starts[nonempty])

    if(noise is not None):
        w          = rng.exponential(noise.pn, n) if noise.pn > 0 else np.zeros(n)
        aggregate  = aggregate + w
        strongest  = strongest + w

    return SlotBatch(aggregate=aggregate, strongest=strongest, active_count=active_count)

def scene_table(scene: Scene) -> list:
    """Rows of (x, y, boresight, mark) for dumping a scene."""
    return [(float(x), float(y), float(b), int(m)) for (x, y), b, m in zip(scene.positions, scene.boresights, scene.marks)]
