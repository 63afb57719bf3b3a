"""Strichartz Fourier transform on the Heisenberg group and weighted inequalities for it."""
from .kernels import BACKEND
from .geometry import HPoint, FanPoint
from .functions import Gaussian, BumpIndicator, SampledGrid
from .report import VerificationReport

__all__ = ["BACKEND", "HPoint", "FanPoint", "Gaussian", "BumpIndicator", "SampledGrid",
           "VerificationReport"]
__version__ = "0.1.0"
