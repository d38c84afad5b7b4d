"""Simulation and verification lab for the Shifted Approximate Equality problem."""
from ._kernels import BACKEND
from .bits import BitString, cyclic_shift, noise_sample, restrict, xor_weight
from .problem import DistributionSpec, PromiseClass, ShapInstance, classify, sample, shift_xor_weight

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BitString",
    "cyclic_shift",
    "xor_weight",
    "noise_sample",
    "restrict",
    "ShapInstance",
    "PromiseClass",
    "DistributionSpec",
    "classify",
    "sample",
    "shift_xor_weight",
]
