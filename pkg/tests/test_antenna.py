#python -m unittest discover tests

import math
import unittest
import numpy as np
from scipy.integrate import quad

from radarfield.antenna import Cone, PlanarArray, make_pattern, aligned_link_gain, array_factor, wrap_angle, pattern_table
from radarfield.enums import PatternKind
from radarfield.errors import DomainError

cone  = Cone(math.pi / 6)
array = PlanarArray()

class TestCone(unittest.TestCase):

	def test_gain(self):
		self.assertTrue(abs(cone.gain(0.0) - 4 * math.pi / (math.pi / 6) ** 2) < 1e-12)
		self.assertTrue(cone.gain(math.pi / 13) == cone.peak_gain)
		self.assertTrue(cone.gain(math.pi / 11) == 0.0)
		self.assertTrue(cone.gain(2 * math.pi) == cone.peak_gain)
		self.assertTrue(Cone(2 * math.pi).gain(math.pi) == Cone(2 * math.pi).peak_gain)

	def test_bad_beamwidth(self):
		for phi in (0.0, -1.0, 7.0):
			with self.assertRaises(DomainError):
				Cone(phi)

	def test_broadcast(self):
		theta = np.linspace(-math.pi, math.pi, 101)
		g     = cone.gain(theta)
		self.assertTrue(g.shape == theta.shape)
		self.assertTrue(abs(np.mean(g > 0) - (1 / 12)) < 0.02)

	def test_cut_integral(self):
		for phi in (math.pi / 12, math.pi / 6, math.pi / 2, math.pi):
			c = Cone(phi)
			total, _ = quad(c.gain, -math.pi, math.pi, points=[-phi / 2, phi / 2], epsabs=1e-13, epsrel=1e-13)
			self.assertTrue(abs(total - 4 * math.pi / phi) < 1e-9, (phi, total))

	def test_even(self):
		theta = np.random.default_rng(3).uniform(-math.pi, math.pi, 10000)
		for pattern in (cone, array):
			self.assertTrue(np.allclose(pattern.gain(theta), pattern.gain(-theta), rtol=1e-12, atol=1e-9), pattern)

class TestPlanarArray(unittest.TestCase):

	def test_hpbw(self):
		hpbw = math.degrees(array.hpbw)
		self.assertTrue(24.0 <= hpbw <= 27.0, hpbw)
		half = array.gain(array.hpbw / 2) / array.peak_gain
		self.assertTrue(abs(half - 0.5) < 1e-9)

	def test_sidelobes(self):
		#Uniform 4-element taper, first sidelobe near -11.3 dB
		self.assertTrue(abs(array.sidelobe_level_db + 11.3) < 0.2, array.sidelobe_level_db)
		meta = array.metadata()
		self.assertTrue(meta["sidelobe_declared_db"] == -10.0)
		self.assertTrue(abs(meta["hpbw_deg"] - math.degrees(array.hpbw)) < 1e-12)

	def test_back_baffle(self):
		self.assertTrue(array.gain(math.pi) == 0.0)
		self.assertTrue(array.gain(0.6 * math.pi) == 0.0)
		open_back = PlanarArray(back_baffled=False)
		self.assertTrue(abs(open_back.gain(math.pi) - open_back.peak_gain) < 1e-9)
		self.assertTrue(open_back.support_halfwidth == math.pi)

	def test_no_half_power_point(self):
		#Two elements a tenth of a wavelength apart never drop to half power before endfire
		with self.assertRaises(DomainError):
			PlanarArray(2, 0.1)
		self.assertTrue(PlanarArray(2, 0.5).hpbw > 0)

	def test_array_factor(self):
		self.assertTrue(abs(array_factor(0.0, 4, 0.5) - 1.0) < 1e-12)
		#First null at sin(theta) = 1 / (N d)
		self.assertTrue(array_factor(math.asin(0.5), 4, 0.5) < 1e-12)
		self.assertTrue(abs(array.first_null - math.asin(0.5)) < 1e-12)

	def test_effective_width(self):
		#Integral of the normalised power pattern over the front half plane
		width, _ = quad(lambda t: array.gain(t) / array.peak_gain, -math.pi / 2, math.pi / 2, limit=200)
		self.assertTrue(0.45 < width < 0.6, width)

class TestLinkGain(unittest.TestCase):

	def test_alignment(self):
		rx = np.zeros(2)
		tx = np.array([100.0, 0.0])
		#tx boresight towards rx (pi), rx boresight towards tx (0)
		self.assertTrue(abs(aligned_link_gain(math.pi, 0.0, tx, rx, cone) - cone.peak_gain ** 2) < 1e-9)
		self.assertTrue(aligned_link_gain(0.0, 0.0, tx, rx, cone) == 0.0)
		self.assertTrue(aligned_link_gain(math.pi, math.pi, tx, rx, cone) == 0.0)

	def test_broadcast(self):
		rng = np.random.default_rng(1)
		pos = rng.uniform(-50, 50, (1000, 2))
		b   = rng.uniform(0, 2 * math.pi, 1000)
		g   = aligned_link_gain(b, 0.0, pos, np.zeros(2), cone)
		self.assertTrue(g.shape == (1000,))
		self.assertTrue(set(np.unique(g)).issubset({0.0, cone.peak_gain ** 2}))

	def test_aligned_fraction(self):
		#Independent uniform boresights: both cones cover the link with probability (phi / 2pi)^2 = 1/144
		n   = 1000000
		rng = np.random.default_rng(4)
		r   = 100 * np.sqrt(rng.random(n))
		ang = rng.uniform(0, 2 * math.pi, n)
		pos = np.stack([r * np.cos(ang), r * np.sin(ang)], axis=-1)
		g   = aligned_link_gain(rng.uniform(0, 2 * math.pi, n), rng.uniform(0, 2 * math.pi, n), pos, np.zeros(2), cone)
		p   = 1 / 144
		hit = np.count_nonzero(g) / n
		self.assertTrue(abs(hit - p) <= 3 * math.sqrt(p * (1 - p) / n), hit)

	def test_swap_symmetry(self):
		rng = np.random.default_rng(5)
		tx  = rng.uniform(-50, 50, (20000, 2))
		rx  = rng.uniform(-50, 50, (20000, 2))
		b_t = rng.uniform(0, 2 * math.pi, 20000)
		b_r = rng.uniform(0, 2 * math.pi, 20000)
		for pattern in (cone, array):
			forward  = aligned_link_gain(b_t, b_r, tx, rx, pattern)
			backward = aligned_link_gain(b_r, b_t, rx, tx, pattern)
			self.assertTrue(np.allclose(forward, backward, rtol=1e-9, atol=1e-9), pattern)
		self.assertTrue(np.count_nonzero(aligned_link_gain(b_t, b_r, tx, rx, cone)) > 0)

	def test_coincident(self):
		with self.assertRaises(DomainError):
			aligned_link_gain(0.0, 0.0, np.zeros(2), np.zeros(2), cone)

class TestHelpers(unittest.TestCase):

	def test_make_pattern(self):
		self.assertTrue(make_pattern("cone", 1.0).phi == 1.0)
		self.assertTrue(make_pattern("array").kind == PatternKind.PLANAR_ARRAY)
		self.assertTrue(make_pattern(PatternKind.CONE).kind == PatternKind.CONE)
		with self.assertRaises(DomainError):
			make_pattern("dish")

	def test_wrap_angle(self):
		x = wrap_angle(np.array([0.0, math.pi, -math.pi, 3 * math.pi, 2 * math.pi + 0.1]))
		self.assertTrue(np.allclose(x, [0.0, math.pi, math.pi, math.pi, 0.1]))

	def test_pattern_table(self):
		rows = pattern_table(cone, 361)
		self.assertTrue(len(rows) == 361)
		self.assertTrue(abs(rows[180][0]) < 1e-12 and rows[180][1] == cone.peak_gain)
		self.assertTrue(rows[0][2] == -np.inf)

if __name__ == '__main__':
	unittest.main()
