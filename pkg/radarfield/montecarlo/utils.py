import math
import numpy as np
from enum import IntEnum
from typing import List, Tuple
from scipy.stats import norm

class Stream(IntEnum):
    SCENE       = 0
    CALIBRATION = 1
    DETECTION   = 2
    ECHO        = 3
    FALSE_ALARM = 4
    ANNULUS     = 5

class Streams:
    """Keyed random substreams under one root seed.

    Every generator is a Philox stream whose key is the path of integers leading
    to it, so draws do not depend on the order in which work is scheduled.
    """
    def __init__(self, seed: int, key: Tuple[int, ...] = ()):
        self.seed = int(seed)
        self.key  = tuple(int(k) for k in key)

    def child(self, *key) -> "Streams":
        return Streams(self.seed, self.key + tuple(int(k) for k in key))

    def generator(self, *key) -> np.random.Generator:
        seq = np.random.SeedSequence(self.seed, spawn_key=self.key + tuple(int(k) for k in key))
        return np.random.Generator(np.random.Philox(seq))

    def __repr__(self):
        return "Streams(seed=%d, key=%s)" % (self.seed, self.key)

def wilson_interval(successes: int, trials: int, confidence: float = 0.99) -> Tuple[float, float]:
    if(trials <= 0):
        return (0.0, 1.0)
    z      = norm.ppf(0.5 + confidence / 2)
    phat   = successes / trials
    z2     = z * z
    denom  = 1.0 + z2 / trials
    center = phat + z2 / (2.0 * trials)
    radius = z * math.sqrt(max(0.0, phat * (1.0 - phat) / trials + z2 / (4.0 * trials * trials)))
    return (max(0.0, (center - radius) / denom), min(1.0, (center + radius) / denom))

def slot_quantile(pfa: float, M: int) -> float:
    #Per-slot level q with 1 - q^(M-1) = pfa
    return math.exp(math.log1p(-pfa) / (M - 1))

def required_samples(q: float) -> int:
    #At least 100 samples above the q-quantile
    return int(math.ceil(100.0 / (1.0 - q) - 1e-6))

def lower_quantile(sorted_samples: np.ndarray, q: float) -> float:
    """Inverse empirical CDF: smallest sample x with F_n(x) >= q."""
    n = sorted_samples.shape[0]
    k = min(max(int(math.ceil(q * n - 1e-12)), 1), n)
    return float(sorted_samples[k - 1])

def chunk_plan(n: int, chunk: int) -> List[int]:
    sizes = [chunk] * (n // chunk)
    if(n % chunk):
        sizes.append(n % chunk)
    return sizes
