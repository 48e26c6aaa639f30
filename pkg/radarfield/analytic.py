# Closed-form interference statistics of a planar Poisson field of pulsed radars
# ********************************************************
import math
import logging
import numpy as np
from typing import Union
from scipy.special import gamma
from scipy.integrate import quad
from scipy.optimize import brentq

from .enums import Fading
from .params import RadarParams, NoiseParams, DerivedConstants
from .errors import DomainError, NumericalError, NoInterferenceThresholdError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

#Quadrature tolerances
PD_RTOL      = 1e-9
NOISE_RTOL   = 1e-8
QUAD_ATOL    = 1e-13
QUAD_LIMIT   = 200

###################################################################################################################################
# Helpers
###################################################################################################################################
def _integrate(fct, a: float, b: float, rtol: float, what: str) -> float:
    out = quad(fct, a, b, epsabs=QUAD_ATOL, epsrel=rtol, limit=QUAD_LIMIT, full_output=1)
    value, abserr = out[0], out[1]
    #quad appends a message when ier > 0
    if(len(out) > 3 or not np.isfinite(value)):
        raise NumericalError(what + " quadrature did not converge", achieved=abserr, requested=rtol)
    return value

def _as_output(x: np.ndarray, scalar: bool):
    return float(x) if scalar else x

def _slot_tail(p: RadarParams) -> float:
    #-ln F_Is(Theta): per-slot log-quantile, equals -ln(1 - P_fa) / (M - 1)
    return -math.log1p(-p.pfa) / (p.M - 1)

def _interference_scale(p: RadarParams) -> float:
    #lambda delta phi^2 Omega omega^(2/alpha) / (4 pi)
    Omega = omega_factor(p.alpha, p.fading, p.alpha_limit)
    return p.density * p.delta * p.phi ** 2 * Omega * p.omega ** (2 / p.alpha) / (4 * math.pi)

def _threshold_scale(p: RadarParams) -> float:
    #Theta / omega
    Omega = omega_factor(p.alpha, p.fading, p.alpha_limit)
    base  = -Omega * (1 - p.delta) * p.density * p.phi ** 2 / (4 * math.pi * math.log1p(-p.pfa))
    return base ** (p.alpha / 2)

def _require(fading: Fading, p: RadarParams, op: str):
    if(p.fading != fading):
        raise DomainError(op + " requires " + fading.name + " parameters, got " + p.fading.name)

###################################################################################################################################
# Range equation and interference statistics
###################################################################################################################################
def derived_constants(p: RadarParams) -> DerivedConstants:
    return DerivedConstants(ell=p.ell, omega=p.omega, Omega=omega_factor(p.alpha, p.fading, p.alpha_limit))

def omega_factor(alpha: float, fading: Fading, limit_mode: bool = False) -> float:
    """E[zeta^(2/alpha)]: 1 without fading, Gamma(1 + 2/alpha) under Rayleigh fading."""
    if(alpha < 2 or (alpha == 2 and not limit_mode)):
        raise DomainError("omega_factor needs alpha > 2, got " + str(alpha))
    if(fading == Fading.RAYLEIGH):
        return float(gamma(1 + 2 / alpha))
    return 1.0

def echo_power(d: ArrayLike, zeta: ArrayLike, p: RadarParams) -> ArrayLike:
    """Reflected power from a target at distance d in the receiver boresight.

    S = omega kappa sigma zeta d^(-2 alpha) / (4 pi), in watts.
    """
    scalar = np.isscalar(d) and np.isscalar(zeta)
    d, zeta = np.asarray(d, dtype=np.float64), np.asarray(zeta, dtype=np.float64)
    if(np.any(d <= 0)):
        raise DomainError("Target distance must be > 0.")
    if(np.any(zeta < 0)):
        raise DomainError("Fading draw must be >= 0.")
    out = p.omega * p.kappa * p.sigma * zeta * d ** (-2 * p.alpha) / (4 * math.pi)
    return _as_output(out, scalar)

def range_for_threshold(theta: float, p: RadarParams) -> float:
    #Solves S(d) = theta for a unit fading draw
    if(theta <= 0):
        raise DomainError("Threshold must be > 0, got " + str(theta))
    return (p.omega * p.kappa * p.sigma / (4 * math.pi * theta)) ** (1 / (2 * p.alpha))

def strongest_cdf(i: ArrayLike, p: RadarParams) -> ArrayLike:
    """CDF of the strongest interferer power over one listening slot.

    F(i) = exp(-lambda delta phi^2 Omega omega^(2/alpha) i^(-2/alpha) / (4 pi)).
    F(0) = 0 by convention (1 for an empty field).
    """
    scalar = np.isscalar(i)
    i      = np.asarray(i, dtype=np.float64)
    if(np.any(i < 0)):
        raise DomainError("Interference power must be >= 0.")
    if(p.density == 0):
        return _as_output(np.ones_like(i), scalar)
    c = _interference_scale(p)
    with np.errstate(divide='ignore'):
        out = np.exp(-c * i ** (-2 / p.alpha))
    return _as_output(out, scalar)

def strongest_pdf(i: ArrayLike, p: RadarParams) -> ArrayLike:
    scalar = np.isscalar(i)
    i      = np.asarray(i, dtype=np.float64)
    if(np.any(i < 0)):
        raise DomainError("Interference power must be >= 0.")
    if(p.density == 0):
        return _as_output(np.zeros_like(i), scalar)
    c   = _interference_scale(p)
    out = np.zeros_like(i)
    pos = i > 0
    x   = c * i[pos] ** (-2 / p.alpha)
    out[pos] = np.exp(-x) * x * (2 / p.alpha) / i[pos]
    return _as_output(out, scalar)

def strongest_quantile(u: float, p: RadarParams) -> float:
    """Inverse of strongest_cdf on (0, 1)."""
    if(not (0 < u < 1)):
        raise DomainError("Quantile level must lie in (0, 1), got " + str(u))
    if(p.density == 0):
        return 0.0
    return (_interference_scale(p) / -math.log(u)) ** (p.alpha / 2)

def detection_threshold(p: RadarParams) -> float:
    """Threshold Theta meeting P_fa against the strongest interferer over M - 1 slots."""
    if(p.density == 0):
        raise NoInterferenceThresholdError("No interference-limited threshold for an empty field; use threshold_noise_only.")
    return p.omega * _threshold_scale(p)

###################################################################################################################################
# Detection performance
###################################################################################################################################
def max_range_nofading(p: RadarParams) -> float:
    """Critical distance d_m of the no-fading step. Independent of P_t and f."""
    _require(Fading.NO_FADING, p, "max_range_nofading")
    if(p.density == 0):
        raise NoInterferenceThresholdError("No interference-limited range for an empty field; use max_range_noise_only.")
    a = (p.kappa * p.sigma / (4 * math.pi)) ** (1 / (2 * p.alpha))
    b = (-4 * math.pi * math.log1p(-p.pfa) / ((1 - p.delta) * p.density * p.phi ** 2)) ** 0.25
    return a * b

def pd_floor(p: RadarParams) -> float:
    #P{I > Theta} = 1 - (1 - P_fa)^(delta / (1 - delta))
    return -math.expm1(math.log1p(-p.pfa) * p.delta / (1 - p.delta))

def pd_nofading(d: float, p: RadarParams) -> float:
    _require(Fading.NO_FADING, p, "pd_nofading")
    S     = echo_power(d, 1.0, p)
    theta = detection_threshold(p)
    if(S >= theta):
        return 1.0
    return 1.0 - strongest_cdf(theta - S, p)

def pd_rayleigh(d: float, p: RadarParams) -> float:
    """Detection probability with Rayleigh fading on echo and interference.

    Integrates exp(-(Theta - i) / S(d)) against the strongest-interferer density
    on (0, Theta). The integral is taken over the CDF level y = F_Is(i), for which
    i / Theta = (a / -ln y)^(alpha/2) with a = -ln F_Is(Theta); omega drops out,
    so the result does not depend on P_t or f.
    """
    _require(Fading.RAYLEIGH, p, "pd_rayleigh")
    if(d <= 0):
        raise DomainError("Target distance must be > 0.")
    if(p.density == 0):
        raise NoInterferenceThresholdError("No interference-limited threshold for an empty field.")
    #Theta / S(d), written without omega
    r     = _threshold_scale(p) * 4 * math.pi * d ** (2 * p.alpha) / (p.kappa * p.sigma)
    a     = _slot_tail(p)
    top   = math.exp(-a)
    half  = p.alpha / 2

    def integrand(y):
        if(y <= 0):
            return math.exp(-r)
        t = (a / -math.log(y)) ** half
        return math.exp(-r * (1 - t))

    return -math.expm1(-a) + _integrate(integrand, 0.0, top, PD_RTOL, "Detection integral")

def pd(d: float, p: RadarParams) -> float:
    if(p.fading == Fading.RAYLEIGH):
        return pd_rayleigh(d, p)
    return pd_nofading(d, p)

def range_at_pd(level: float, p: RadarParams) -> float:
    """Distance at which the analytic P_d falls to `level`."""
    floor = pd_floor(p)
    if(not (floor < level < 1)):
        raise DomainError("P_d level must lie in (" + str(floor) + ", 1), got " + str(level))

    if(p.fading == Fading.NO_FADING):
        lo = max_range_nofading(p)
    else:
        lo = range_for_threshold(detection_threshold(p), p) * 1e-3
    hi = 2 * lo
    for _ in range(200):
        if(pd(hi, p) < level):
            break
        lo, hi = hi, 2 * hi
    else:
        raise NumericalError("No P_d crossing found", level=level, upper=hi)

    g = lambda logd: pd(math.exp(logd), p) - level
    return math.exp(brentq(g, math.log(lo), math.log(hi), xtol=1e-12, rtol=1e-12))

###################################################################################################################################
# Receiver noise
###################################################################################################################################
def noise_power(n: NoiseParams) -> float:
    return n.pn

def _require_noise(n: NoiseParams) -> float:
    pn = n.pn
    if(pn <= 0):
        raise DomainError("Noise power must be > 0 for noise-limited thresholds.")
    return pn

def cdf_noise_plus_interference(z: float, p: RadarParams, n: NoiseParams) -> float:
    """CDF of Z = W + I_s with W ~ exp(mean P_n).

    Convolution of the exponential noise with the strongest-interferer CDF,
    integrated over y = 1 - exp(-w / P_n).
    """
    if(z < 0):
        raise DomainError("z must be >= 0, got " + str(z))
    if(z == 0):
        return 0.0
    pn = n.pn
    if(pn == 0):
        return strongest_cdf(z, p)
    top = -math.expm1(-z / pn)
    if(p.density == 0):
        return top

    c, k = _interference_scale(p), -2 / p.alpha

    def integrand(y):
        x = z + pn * math.log1p(-y)
        return math.exp(-c * x ** k) if x > 0 else 0.0

    return _integrate(integrand, 0.0, top, NOISE_RTOL, "Noise/interference CDF")

def _tail_noise_plus_interference(z: float, p: RadarParams, pn: float) -> float:
    #1 - F_Z(z), integrated directly so the P_fa tail keeps its relative accuracy
    top  = -math.expm1(-z / pn)
    c, k = _interference_scale(p), -2 / p.alpha

    def integrand(y):
        x = z + pn * math.log1p(-y)
        return -math.expm1(-c * x ** k) if x > 0 else 1.0

    return math.exp(-z / pn) + _integrate(integrand, 0.0, top, NOISE_RTOL, "Noise/interference tail")

def threshold_noise_only(p: RadarParams, n: NoiseParams) -> float:
    return -_require_noise(n) * math.log(pd_floor(p))

def threshold_with_noise(p: RadarParams, n: NoiseParams) -> float:
    """Threshold meeting P_fa against noise plus the strongest interferer.

    Root of 1 - F_Z(Theta) = 1 - (1 - P_fa)^(1/(M-1)), bracketed between the
    noise-only threshold and the interference-only threshold plus 40 P_n.
    """
    if(n.pn == 0):
        return detection_threshold(p)
    if(p.density == 0):
        return threshold_noise_only(p, n)

    pn     = n.pn
    target = pd_floor(p)
    lo     = threshold_noise_only(p, n)
    hi     = detection_threshold(p) + 40 * pn
    g      = lambda theta: _tail_noise_plus_interference(theta, p, pn) - target

    g_lo = g(lo)
    if(g_lo < 0):
        #Only reachable through quadrature error: Z >= W pointwise
        if(abs(g_lo) <= NOISE_RTOL * target):
            return lo
        raise NumericalError("Lower bracket does not bound the threshold", lower=lo, residual=g_lo)
    for _ in range(60):
        if(g(hi) <= 0):
            break
        hi *= 2
    else:
        raise NumericalError("Upper bracket does not bound the threshold", lower=lo, upper=hi, target=target)

    return brentq(g, lo, hi, xtol=lo * 1e-12, rtol=1e-12)

def max_range_with_noise(p: RadarParams, n: NoiseParams) -> float:
    return range_for_threshold(threshold_with_noise(p, n), p)

def max_range_noise_only(p: RadarParams, n: NoiseParams) -> float:
    return range_for_threshold(threshold_noise_only(p, n), p)
