#python -m unittest discover tests

import math
import unittest
import numpy as np
from scipy.integrate import quad

from radarfield import analytic
from radarfield.enums import Fading
from radarfield.params import RadarParams, NoiseParams, dbm_to_watt
from radarfield.errors import DomainError, NoInterferenceThresholdError

defaults = RadarParams()
rayleigh = RadarParams(alpha=3.0, freq=2.4e9, fading=Fading.RAYLEIGH, alpha_limit=False)
noise    = NoiseParams()

def random_params(rng, fading=None):
	return RadarParams(density=10 ** rng.uniform(-6, -2),
					   M=int(rng.integers(2, 200)),
					   phi=rng.uniform(0.05, 2 * math.pi),
					   alpha=rng.uniform(2.05, 5.0),
					   pt=10 ** rng.uniform(-4, 0),
					   freq=10 ** rng.uniform(9, 11),
					   pfa=rng.uniform(0.01, 0.5),
					   fading=fading if fading is not None else [Fading.NO_FADING, Fading.RAYLEIGH][int(rng.integers(0, 2))],
					   alpha_limit=False)

class TestThreshold(unittest.TestCase):

	def test_defaults(self):
		theta = analytic.detection_threshold(defaults)
		self.assertTrue(abs(theta / 6.81e-11 - 1) < 1e-2, theta)
		self.assertTrue(abs(analytic.max_range_nofading(defaults) - 24.96) < 0.02)
		self.assertTrue(abs(analytic.pd_floor(defaults) - 1.0637e-3) < 1e-7)

	def test_quantile_identity(self):
		rng = np.random.default_rng(0)
		for _ in range(100):
			p     = random_params(rng)
			theta = analytic.detection_threshold(p)
			c     = p.density * p.delta * p.phi ** 2 * analytic.omega_factor(p.alpha, p.fading) * p.omega ** (2 / p.alpha) / (4 * math.pi)
			pfa   = -math.expm1(-(p.M - 1) * c * theta ** (-2 / p.alpha))
			self.assertTrue(abs(pfa / p.pfa - 1) < 1e-12, (p, pfa))

			via_cdf = -math.expm1((p.M - 1) * math.log(analytic.strongest_cdf(theta, p)))
			self.assertTrue(abs(via_cdf / p.pfa - 1) < 1e-8)

	def test_threshold_monotone(self):
		self.assertTrue(analytic.detection_threshold(defaults.replace(density=2e-4)) > analytic.detection_threshold(defaults))
		self.assertTrue(analytic.detection_threshold(defaults.replace(pfa=0.01)) > analytic.detection_threshold(defaults))

	def test_empty_field(self):
		p = defaults.replace(density=0.0)
		self.assertTrue(analytic.strongest_cdf(1e-12, p) == 1.0)
		self.assertTrue(analytic.strongest_pdf(1e-12, p) == 0.0)
		with self.assertRaises(NoInterferenceThresholdError):
			analytic.detection_threshold(p)

	def test_omega_factor(self):
		self.assertTrue(analytic.omega_factor(3.0, Fading.NO_FADING) == 1.0)
		self.assertTrue(abs(analytic.omega_factor(4.0, Fading.RAYLEIGH) - math.sqrt(math.pi) / 2) < 1e-12)
		self.assertTrue(abs(analytic.omega_factor(2.0, Fading.RAYLEIGH, limit_mode=True) - 1.0) < 1e-12)
		with self.assertRaises(DomainError):
			analytic.omega_factor(2.0, Fading.RAYLEIGH)

	def test_alpha_two_needs_limit_mode(self):
		with self.assertRaises(DomainError):
			RadarParams(alpha=2.0, alpha_limit=False)
		with self.assertRaises(DomainError):
			RadarParams(alpha=1.5)

class TestStrongestInterferer(unittest.TestCase):

	def test_cdf_shape(self):
		i = np.geomspace(1e-16, 1e-6, 200)
		F = analytic.strongest_cdf(i, rayleigh)
		self.assertTrue(np.all(np.diff(F) >= 0))
		self.assertTrue(analytic.strongest_cdf(0.0, rayleigh) == 0.0)
		self.assertTrue(F[-1] > 0.999)

	def test_pdf_integrates_cdf(self):
		p  = defaults.replace(alpha=3.0, alpha_limit=False)
		a  = analytic.strongest_quantile(0.05, p)
		b  = analytic.strongest_quantile(0.95, p)
		mass, _ = quad(lambda x: analytic.strongest_pdf(x, p), a, b, epsrel=1e-10, limit=200)
		self.assertTrue(abs(mass - 0.9) < 1e-7, mass)

	def test_quantile_inverts_cdf(self):
		for u in (0.01, 0.5, 0.99):
			self.assertTrue(abs(analytic.strongest_cdf(analytic.strongest_quantile(u, rayleigh), rayleigh) - u) < 1e-12)

	def test_negative_power(self):
		with self.assertRaises(DomainError):
			analytic.strongest_cdf(-1.0, defaults)

class TestRangeEquation(unittest.TestCase):

	def test_echo_power(self):
		S = analytic.echo_power(10.0, 1.0, defaults)
		self.assertTrue(abs(S - defaults.omega * 100 * 1e-4 / (4 * math.pi)) < 1e-20)
		self.assertTrue(abs(analytic.range_for_threshold(S, defaults) - 10.0) < 1e-9)
		S = analytic.echo_power(np.array([1.0, 2.0]), np.array([1.0, 2.0]), defaults)
		self.assertTrue(abs(S[0] / S[1] - 2 ** (2 * defaults.alpha) / 2) < 1e-9)
		with self.assertRaises(DomainError):
			analytic.echo_power(0.0, 1.0, defaults)

	def test_dm_scaling(self):
		lam = np.geomspace(1e-6, 1e-3, 10)
		dm  = np.array([analytic.max_range_nofading(defaults.replace(density=x)) for x in lam])
		slope = np.polyfit(np.log(lam), np.log(dm), 1)[0]
		self.assertTrue(abs(slope + 0.25) < 0.005, slope)

		phi   = np.geomspace(0.05, 2 * math.pi, 10)
		dm    = np.array([analytic.max_range_nofading(defaults.replace(phi=x)) for x in phi])
		slope = np.polyfit(np.log(phi), np.log(dm), 1)[0]
		self.assertTrue(abs(slope + 0.5) < 1e-9, slope)

	def test_dm_is_threshold_range(self):
		theta = analytic.detection_threshold(defaults)
		self.assertTrue(abs(analytic.range_for_threshold(theta, defaults) / analytic.max_range_nofading(defaults) - 1) < 1e-12)

	def test_narrow_beam_hundred_metres(self):
		#d_m ~ phi^(-1/2): 100 m at phi = (pi / 6) * (24.96 / 100)^2
		phi = defaults.phi * (analytic.max_range_nofading(defaults) / 100.0) ** 2
		self.assertTrue(abs(analytic.max_range_nofading(defaults.replace(phi=phi)) - 100.0) < 1e-9)

	def test_power_frequency_invariance(self):
		base = analytic.max_range_nofading(defaults)
		for pt_dbm in (-5.0, 10.0, 25.0):
			for freq in (2.4e9, 60e9):
				dm = analytic.max_range_nofading(defaults.replace(pt=dbm_to_watt(pt_dbm), freq=freq))
				self.assertTrue(abs(dm / base - 1) < 1e-9)

class TestDetection(unittest.TestCase):

	def test_nofading_step(self):
		dm = analytic.max_range_nofading(defaults)
		self.assertTrue(analytic.pd(0.99 * dm, defaults) == 1.0)
		self.assertTrue(analytic.pd(1.01 * dm, defaults) < 0.5)
		far = analytic.pd(10 * dm, defaults)
		self.assertTrue(abs(far / analytic.pd_floor(defaults) - 1) < 1e-3, far)

	def test_rayleigh_limits(self):
		floor = analytic.pd_floor(rayleigh)
		self.assertTrue(analytic.pd(0.1, rayleigh) > 0.9999)
		self.assertTrue(abs(analytic.pd(5000.0, rayleigh) - floor) < 1e-6)
		d = np.linspace(1.0, 80.0, 40)
		p = np.array([analytic.pd(x, rayleigh) for x in d])
		self.assertTrue(np.all(np.diff(p) < 1e-12) and p[0] > p[-1])
		self.assertTrue(np.all(p >= floor))

	def test_rayleigh_matches_direct_integral(self):
		#Integrate exp(-(Theta - i) / S) f(i) over i directly
		theta = analytic.detection_threshold(rayleigh)
		for d in (10.0, 21.5, 40.0):
			S      = analytic.echo_power(d, 1.0, rayleigh)
			body,_ = quad(lambda i: math.exp(-(theta - i) / S) * analytic.strongest_pdf(i, rayleigh), 0.0, theta,
						  epsabs=1e-13, epsrel=1e-10, limit=500, points=[theta * 1e-3, theta * 1e-2, theta * 0.1])
			direct = 1 - analytic.strongest_cdf(theta, rayleigh) + body
			self.assertTrue(abs(analytic.pd(d, rayleigh) - direct) < 1e-7, (d, direct))

	def test_rayleigh_alpha_ordering(self):
		#alpha = 4 decays faster at large distance
		p4 = rayleigh.replace(alpha=4.0)
		self.assertTrue(analytic.pd(40.0, p4) < analytic.pd(40.0, rayleigh))

	def test_rayleigh_invariance(self):
		for d in (5.0, 20.0, 35.0):
			base = analytic.pd(d, rayleigh)
			for pt_dbm in (-10.0, 20.0):
				for freq in (2.4e9, 60e9):
					pd = analytic.pd(d, rayleigh.replace(pt=dbm_to_watt(pt_dbm), freq=freq))
					self.assertTrue(abs(pd / base - 1) < 1e-9, (d, pd, base))

	def test_roc(self):
		pfa = np.geomspace(1e-4, 0.99, 15)
		for density in (1e-5, 1e-4):
			p   = rayleigh.replace(density=density)
			roc = np.array([analytic.pd(30.0, p.replace(pfa=x)) for x in pfa])
			self.assertTrue(np.all(np.diff(roc) >= -1e-12))
			self.assertTrue(roc[-1] > 0.95)
		low  = [analytic.pd(30.0, rayleigh.replace(density=1e-5, pfa=x)) for x in pfa]
		high = [analytic.pd(30.0, rayleigh.replace(density=1e-4, pfa=x)) for x in pfa]
		self.assertTrue(all(a > b for a, b in zip(low, high)))

	def test_range_at_pd(self):
		d = analytic.range_at_pd(0.5, rayleigh)
		self.assertTrue(abs(analytic.pd(d, rayleigh) - 0.5) < 1e-8)
		#Theta / S(d) = 1 near 21.5 m at 2.4 GHz, alpha = 3
		self.assertTrue(15.0 < d < 30.0, d)
		dm = analytic.range_at_pd(0.5, defaults)
		self.assertTrue(abs(dm / analytic.max_range_nofading(defaults) - 1) < 1e-2)
		with self.assertRaises(DomainError):
			analytic.range_at_pd(analytic.pd_floor(rayleigh) / 2, rayleigh)

	def test_wrong_fading(self):
		with self.assertRaises(DomainError):
			analytic.pd_rayleigh(10.0, defaults)
		with self.assertRaises(DomainError):
			analytic.max_range_nofading(rayleigh)

class TestNoise(unittest.TestCase):
	preset = defaults.replace(pt=dbm_to_watt(20.0))

	def test_noise_power(self):
		self.assertTrue(abs(analytic.noise_power(noise) / 5.005e-12 - 1) < 1e-3)

	def test_noise_only(self):
		theta = analytic.threshold_noise_only(self.preset, noise)
		self.assertTrue(abs(theta / 3.427e-11 - 1) < 1e-3, theta)
		dm = analytic.max_range_noise_only(self.preset, noise)
		self.assertTrue(abs(dm - 52.7) < 0.1, dm)

	def test_cdf_reduces_to_exponential(self):
		p = self.preset.replace(density=1e-14)
		for z in (1e-12, 5e-12, 2e-11):
			exp_cdf = -math.expm1(-z / noise.pn)
			self.assertTrue(abs(analytic.cdf_noise_plus_interference(z, p, noise) - exp_cdf) < 1e-6)

	def test_cdf_bounds(self):
		for z in (1e-11, 1e-10, 1e-9):
			F = analytic.cdf_noise_plus_interference(z, self.preset, noise)
			self.assertTrue(F <= analytic.strongest_cdf(z, self.preset) + 1e-9)
			self.assertTrue(F <= -math.expm1(-z / noise.pn) + 1e-9)

	def test_threshold_meets_pfa(self):
		theta = analytic.threshold_with_noise(self.preset, noise)
		F     = analytic.cdf_noise_plus_interference(theta, self.preset, noise)
		pfa   = 1 - F ** (self.preset.M - 1)
		self.assertTrue(abs(pfa / self.preset.pfa - 1) < 1e-4, pfa)

	def test_dm_asymptotes(self):
		only = analytic.max_range_noise_only(self.preset, noise)
		for density in np.geomspace(1e-10, 1e-2, 9):
			p     = self.preset.replace(density=density)
			both  = analytic.max_range_with_noise(p, noise)
			inter = analytic.max_range_nofading(p)
			self.assertTrue(both <= min(only, inter) * (1 + 1e-6), density)
			if(density >= 1e-4):
				self.assertTrue(abs(both / inter - 1) < 1e-2, density)
			if(density <= 1e-8):
				self.assertTrue(abs(both / only - 1) < 1e-2, density)

	def test_no_noise_fallback(self):
		silent = NoiseParams(temp=0.0)
		self.assertTrue(analytic.threshold_with_noise(self.preset, silent) == analytic.detection_threshold(self.preset))
		with self.assertRaises(DomainError):
			analytic.threshold_noise_only(self.preset, silent)
		empty = self.preset.replace(density=0.0)
		self.assertTrue(analytic.threshold_with_noise(empty, noise) == analytic.threshold_noise_only(empty, noise))

if __name__ == '__main__':
	unittest.main()
