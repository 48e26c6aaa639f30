# Empirical interference statistics, threshold calibration and detection estimates
# ********************************************************
import math
import logging
import numpy as np
from dataclasses import dataclass
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Tuple
from scipy.stats import kstest

from ..enums import Fading, Statistic
from ..params import RadarParams, NoiseParams
from ..antenna import AntennaPattern
from ..field import SlotBatch, sample_slot_interference, window_radius
from ..analytic import detection_threshold, echo_power, strongest_cdf, threshold_noise_only
from ..errors import DomainError, InsufficientSamplesError, NumericalError
from .config import MC_BUDGET
from .utils import Stream, Streams, wilson_interval, slot_quantile, required_samples, lower_quantile, chunk_plan

logger = logging.getLogger(__name__)

###################################################################################################################################
@dataclass(frozen=True, eq=False)
class EmpiricalDistribution:
    samples: np.ndarray

    @classmethod
    def from_samples(cls, samples) -> "EmpiricalDistribution":
        return cls(np.sort(np.asarray(samples, dtype=np.float64)))

    @property
    def count(self) -> int:
        return int(self.samples.shape[0])

    def quantile(self, q: float) -> float:
        if(not (0 <= q <= 1)):
            raise DomainError("Quantile level must lie in [0, 1], got " + str(q))
        return lower_quantile(self.samples, q)

    def cdf(self, x: float) -> float:
        return np.searchsorted(self.samples, x, side='right') / self.count

    def exceedances(self, x: float) -> int:
        return int(self.count - np.searchsorted(self.samples, x, side='left'))

@dataclass(frozen=True)
class Estimate:
    value:   float
    ci_low:  float
    ci_high: float
    trials:  int

    def __post_init__(self):
        if(not (self.ci_low <= self.value <= self.ci_high)):
            raise NumericalError("Estimate outside its confidence interval", value=self.value, ci=(self.ci_low, self.ci_high))

    def contains(self, x: float) -> bool:
        return self.ci_low <= x <= self.ci_high

    def to_dict(self) -> dict:
        return {"value": self.value, "ci_low": self.ci_low, "ci_high": self.ci_high, "trials": self.trials}

@dataclass(frozen=True, eq=False)
class InterferenceDistributions:
    aggregate: EmpiricalDistribution
    strongest: EmpiricalDistribution

    def select(self, statistic: Statistic) -> EmpiricalDistribution:
        return self.strongest if statistic == Statistic.STRONGEST else self.aggregate

###################################################################################################################################
# Sampling
###################################################################################################################################
def resolve_radius(p: RadarParams, radius: Optional[float] = None, noise: Optional[NoiseParams] = None) -> float:
    if(radius is not None):
        return radius
    if(p.density == 0):
        return 1.0
    if(p.limit_mode):
        logger.warning("alpha = 2 limit mode: the window bounds the strongest interferer only, aggregate truncation error is unbounded.")
    theta = detection_threshold(p)
    if(noise is not None and noise.pn > 0):
        theta = max(theta, threshold_noise_only(p, noise))
    return window_radius(p, theta, MC_BUDGET.WINDOW_EPSILON, MC_BUDGET.WINDOW_SPACINGS)

def draw_slots(p: RadarParams, pattern: AntennaPattern, n: int, streams: Streams, radius: float, noise: Optional[NoiseParams] = None,
               inner_radius: float = 0.0) -> SlotBatch:
    """n independent per-slot interference draws, split into keyed chunks.

    The chunk size depends on the parameters only, so the output is the same
    for any number of workers.
    """
    mean  = p.density * p.delta * pattern.support_halfwidth * (radius ** 2 - inner_radius ** 2)
    chunk = int(max(1, min(MC_BUDGET.CHUNK_SAMPLES, MC_BUDGET.MAX_POINTS_PER_CHUNK // max(mean, 1.0))))
    sizes = chunk_plan(n, chunk)

    def run(job):
        index, size = job
        return sample_slot_interference(p, pattern, radius, size, streams.generator(index), noise=noise, max_points=MC_BUDGET.POINT_CAP,
                                        inner_radius=inner_radius)

    jobs = list(enumerate(sizes))
    if(MC_BUDGET.WORKERS > 1 and len(jobs) > 1):
        with ThreadPoolExecutor(max_workers=MC_BUDGET.WORKERS) as pool:
            batches = list(pool.map(run, jobs))
    else:
        batches = [run(job) for job in jobs]

    return SlotBatch(aggregate    = np.concatenate([b.aggregate for b in batches]),
                     strongest    = np.concatenate([b.strongest for b in batches]),
                     active_count = np.concatenate([b.active_count for b in batches]))

def collect_interference(p: RadarParams, pattern: AntennaPattern, n_samples: int, streams: Streams,
                         radius: Optional[float] = None, noise: Optional[NoiseParams] = None) -> InterferenceDistributions:
    """Aggregate and strongest per-slot interference over n_samples fresh scenes."""
    if(n_samples < 1):
        raise DomainError("n_samples must be >= 1, got " + str(n_samples))
    radius = resolve_radius(p, radius, noise)
    batch  = draw_slots(p, pattern, n_samples, streams.child(Stream.CALIBRATION), radius, noise)
    return InterferenceDistributions(aggregate=EmpiricalDistribution.from_samples(batch.aggregate),
                                     strongest=EmpiricalDistribution.from_samples(batch.strongest))

def ks_distance(dist: EmpiricalDistribution, p: RadarParams) -> float:
    """KS statistic between strongest-interferer samples and the closed-form CDF."""
    return float(kstest(dist.samples, lambda x: strongest_cdf(x, p)).statistic)

def window_sensitivity(p: RadarParams, pattern: AntennaPattern, n_samples: int, streams: Streams,
                       statistic: Statistic = Statistic.AGGREGATE, radius: Optional[float] = None) -> Tuple[float, float]:
    """Calibrated thresholds (theta_R, theta_2R) on the window R and on its double.

    The 2R draws reuse the R draws and add an independent annulus R..2R, so the
    difference is the truncation effect alone.
    """
    if(n_samples < 1):
        raise DomainError("n_samples must be >= 1, got " + str(n_samples))
    radius = resolve_radius(p, radius)
    inner  = draw_slots(p, pattern, n_samples, streams.child(Stream.CALIBRATION), radius)
    outer  = draw_slots(p, pattern, n_samples, streams.child(Stream.ANNULUS), 2 * radius, inner_radius=radius)
    if(statistic == Statistic.STRONGEST):
        near, far = inner.strongest, np.maximum(inner.strongest, outer.strongest)
    else:
        near, far = inner.aggregate, inner.aggregate + outer.aggregate
    theta_near = calibrate_threshold(EmpiricalDistribution.from_samples(near), p)
    theta_far  = calibrate_threshold(EmpiricalDistribution.from_samples(far), p)
    logger.info("Window %.4g m: theta %.6g, doubled window: theta %.6g.", radius, theta_near, theta_far)
    return theta_near, theta_far

###################################################################################################################################
# Calibration and detection
###################################################################################################################################
def calibrate_threshold(dist: EmpiricalDistribution, p: RadarParams) -> float:
    """Empirical per-slot quantile q = (1 - P_fa)^(1/(M-1)) of the interference."""
    q        = slot_quantile(p.pfa, p.M)
    required = required_samples(q)
    if(dist.count < required):
        raise InsufficientSamplesError(dist.count, required)
    return dist.quantile(q)

def _detection_trials(p: RadarParams, pattern: AntennaPattern, trials: int, streams: Streams, statistic: Statistic,
                      radius: Optional[float], noise: Optional[NoiseParams]) -> Tuple[np.ndarray, np.ndarray]:
    #Interference in the echo slot and the echo fading draw of every trial
    if(trials < 1):
        raise DomainError("trials must be >= 1, got " + str(trials))
    radius = resolve_radius(p, radius, noise)
    batch  = draw_slots(p, pattern, trials, streams.child(Stream.DETECTION), radius, noise)
    interf = batch.strongest if statistic == Statistic.STRONGEST else batch.aggregate
    if(p.fading == Fading.RAYLEIGH):
        zeta = streams.generator(Stream.ECHO).exponential(1.0, trials)
    else:
        zeta = np.ones(trials)
    return interf, zeta

def _echo_gain(p: RadarParams, pattern: AntennaPattern) -> float:
    #echo_power assumes the cone gain; rescale to the two-way peak gain of `pattern`
    return (pattern.peak_gain / p.gain) ** 2

def _estimate(successes: int, trials: int) -> Estimate:
    lo, hi = wilson_interval(successes, trials, MC_BUDGET.CONFIDENCE)
    value  = successes / trials
    return Estimate(value=value, ci_low=min(lo, value), ci_high=max(hi, value), trials=trials)

def estimate_pd(d: float, theta: float, p: RadarParams, pattern: AntennaPattern, trials: int, streams: Streams,
                statistic: Statistic = Statistic.AGGREGATE, radius: Optional[float] = None, noise: Optional[NoiseParams] = None) -> Estimate:
    """Fraction of trials where echo plus echo-slot interference reaches theta."""
    interf, zeta = _detection_trials(p, pattern, trials, streams, statistic, radius, noise)
    detected     = echo_power(d, zeta, p) * _echo_gain(p, pattern) + interf >= theta
    return _estimate(int(np.count_nonzero(detected)), trials)

def empirical_false_alarm(theta: float, p: RadarParams, pattern: AntennaPattern, trials: int, streams: Streams,
                          statistic: Statistic = Statistic.AGGREGATE, radius: Optional[float] = None, noise: Optional[NoiseParams] = None) -> Estimate:
    """Per-cycle false-alarm rate 1 - (1 - p_slot)^(M-1) from i.i.d. slot draws."""
    if(trials < 1):
        raise DomainError("trials must be >= 1, got " + str(trials))
    radius  = resolve_radius(p, radius, noise)
    batch   = draw_slots(p, pattern, trials, streams.child(Stream.FALSE_ALARM), radius, noise)
    interf  = batch.strongest if statistic == Statistic.STRONGEST else batch.aggregate
    hits    = int(np.count_nonzero(interf >= theta))
    lo, hi  = wilson_interval(hits, trials, MC_BUDGET.CONFIDENCE)
    cycle   = lambda x: -math.expm1((p.M - 1) * math.log1p(-min(x, 1.0 - 1e-16)))
    value   = cycle(hits / trials)
    return Estimate(value=value, ci_low=min(cycle(lo), value), ci_high=max(cycle(hi), value), trials=trials)

def estimate_dm(theta: float, p: RadarParams, pattern: AntennaPattern, streams: Streams, level: Optional[float] = None,
                trials: Optional[int] = None, statistic: Statistic = Statistic.AGGREGATE,
                radius: Optional[float] = None, noise: Optional[NoiseParams] = None) -> Estimate:
    """Distance where the empirical P_d crosses `level`, by bisection on log d.

    One set of trials is reused at every distance, so the empirical P_d is
    monotone in d. The interval spans the crossings of the Wilson bounds of
    `level` and the bisection brackets.
    """
    level  = MC_BUDGET.PD_LEVEL if level is None else level
    trials = MC_BUDGET.DETECTION_TRIALS if trials is None else trials
    if(not (0 < level < 1)):
        raise DomainError("P_d level must lie in (0, 1), got " + str(level))

    radius       = resolve_radius(p, radius, noise)
    interf, zeta = _detection_trials(p, pattern, trials, streams, statistic, radius, noise)
    unit_echo    = echo_power(1.0, zeta, p) * _echo_gain(p, pattern)
    two_alpha    = 2 * p.alpha
    pd_hat       = lambda d: np.count_nonzero(unit_echo * d ** (-two_alpha) + interf >= theta) / trials

    d_min, d_max = 0.1, radius

    def crossing(target: float) -> Tuple[float, float]:
        lo, hi = d_min, d_max
        if(pd_hat(lo) < target or pd_hat(hi) >= target):
            raise NumericalError("No P_d crossing in the distance bracket", level=target, bracket=(lo, hi),
                                 pd_low=pd_hat(lo), pd_high=pd_hat(hi))
        while(hi / lo - 1 > MC_BUDGET.BISECTION_RTOL):
            mid = math.sqrt(lo * hi)
            if(pd_hat(mid) >= target):
                lo = mid
            else:
                hi = mid
        return lo, hi

    lo, hi  = crossing(level)
    value   = math.sqrt(lo * hi)
    w_lo, w_hi = wilson_interval(level * trials, trials, MC_BUDGET.CONFIDENCE)

    ci_low, ci_high = lo, hi
    if(w_hi < pd_hat(d_min)):
        ci_low = min(ci_low, crossing(w_hi)[0])
    if(w_lo > pd_hat(d_max)):
        ci_high = max(ci_high, crossing(w_lo)[1])
    return Estimate(value=value, ci_low=ci_low, ci_high=ci_high, trials=trials)
