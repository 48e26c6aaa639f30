# Parameter presets for the reference set-ups
#********************************************************
import math
from .enums import Fading
from .params import RadarParams, NoiseParams, dbm_to_watt

####################################################################################################
#mmWave radars without fading, alpha = 2 read as its limit
class MmWaveNoFading:
    def __init__(self, density=1e-4, phi=math.pi / 6, pfa=0.1, M=100):
        self.density = density
        self.phi     = phi
        self.pfa     = pfa
        self.M       = M

    def params(self, **kwargs) -> RadarParams:
        base = dict(density=self.density, M=self.M, phi=self.phi, alpha=2.0, pt=dbm_to_watt(10.0), freq=60e9,
                    kappa=10.0, sigma=10.0, pfa=self.pfa, fading=Fading.NO_FADING, alpha_limit=True)
        base.update(kwargs)
        return RadarParams(**base)

    def noise(self):
        return None

####################################################################################################
#2.4 GHz radars under Rayleigh fading
class SubSixRayleigh:
    def __init__(self, alpha=3.0, density=1e-4, phi=math.pi / 6, pfa=0.1, M=100):
        self.alpha   = alpha
        self.density = density
        self.phi     = phi
        self.pfa     = pfa
        self.M       = M

    def params(self, **kwargs) -> RadarParams:
        base = dict(density=self.density, M=self.M, phi=self.phi, alpha=self.alpha, pt=dbm_to_watt(10.0), freq=2.4e9,
                    kappa=10.0, sigma=10.0, pfa=self.pfa, fading=Fading.RAYLEIGH, alpha_limit=False)
        base.update(kwargs)
        return RadarParams(**base)

    def noise(self):
        return None

####################################################################################################
#Receiver-noise set-up: 20 dBm transmitters, 125 MHz bandwidth at 290 K, noise figure 10
class NoiseAppendix(MmWaveNoFading):
    def __init__(self, density=1e-4, phi=math.pi / 6, pfa=0.1, M=100, pt_dbm=20.0, bandwidth=125e6):
        super().__init__(density=density, phi=phi, pfa=pfa, M=M)
        self.pt_dbm    = pt_dbm
        self.bandwidth = bandwidth

    def params(self, **kwargs) -> RadarParams:
        kwargs.setdefault("pt", dbm_to_watt(self.pt_dbm))
        return super().params(**kwargs)

    def noise(self) -> NoiseParams:
        return NoiseParams(temp=290.0, bandwidth=self.bandwidth, noise_figure=10.0)
