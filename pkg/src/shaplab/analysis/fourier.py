"""Fourier analysis on the Boolean cube and the noise operator.

Functions use the expectation convention: ``<f, g> = E_x f(x) g(x)``,
``||f||_p = (E_x |f(x)|**p)**(1/p)`` and ``f_hat(s) = <f, chi_s>`` with
``chi_s(x) = (-1)**|x & s|``.  Distances between distributions elsewhere in
the package use plain sums instead.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import _kernels
from ..errors import DomainError
from .dense import MAX_BITS, DenseDistribution, popcounts

__all__ = [
    "FourierSpectrum",
    "wht",
    "inverse_wht",
    "norm",
    "noise_multiplier",
    "damp",
    "apply_noise",
    "apply_noise_direct",
    "character",
]


@dataclass(frozen=True, eq=False)
class FourierSpectrum:
    m: int
    coeffs: np.ndarray

    def weight(self) -> float:
        return float(np.dot(self.coeffs, self.coeffs))

    def degree_profile(self) -> np.ndarray:
        """Total squared weight at each level ``|s| = 0 .. m``."""
        return np.bincount(popcounts(self.m), weights=self.coeffs**2, minlength=self.m + 1)


def _levels(f) -> tuple[np.ndarray, int]:
    f = np.asarray(f, dtype=np.float64)
    size = f.shape[0]
    m = size.bit_length() - 1
    if f.ndim != 1 or size != 1 << m:
        raise DomainError("expected a vector of length 2**m")
    if m > MAX_BITS:
        raise DomainError(f"m = {m} exceeds the cap {MAX_BITS}")
    return f, m


def wht(f) -> FourierSpectrum:
    """``f_hat(s) = E_x f(x) chi_s(x)`` for all ``s`` via the fast transform."""
    f, m = _levels(f)
    return FourierSpectrum(m, _kernels.fwht(f) / (1 << m))


def inverse_wht(spec: FourierSpectrum) -> np.ndarray:
    return _kernels.fwht(spec.coeffs)


def character(m: int, s: int) -> np.ndarray:
    return 1.0 - 2.0 * (popcounts(m)[np.arange(1 << m) & s] % 2)


def norm(f, p: float) -> float:
    """Expectation-normalised ``p``-norm; ``p = inf`` gives the maximum."""
    a = np.abs(np.asarray(f, dtype=np.float64))
    if np.isinf(p):
        return float(a.max())
    if p <= 0:
        raise DomainError("p must be positive")
    return float(np.mean(a**p) ** (1.0 / p))


def noise_multiplier(m: int, rho: float) -> np.ndarray:
    """``rho ** |s|`` with the convention ``0 ** 0 = 1``."""
    return np.power(float(rho), popcounts(m).astype(np.float64))


def damp(f, rho: float) -> np.ndarray:
    """``sum_s rho**|s| f_hat(s) chi_s``."""
    spec = wht(f)
    return inverse_wht(FourierSpectrum(spec.m, spec.coeffs * noise_multiplier(spec.m, rho)))


def _check_delta(delta: float) -> None:
    if not 0.0 <= delta <= 0.5:
        raise DomainError(f"noise rate {delta} outside [0, 1/2]")


def apply_noise(d: DenseDistribution, delta: float) -> DenseDistribution:
    """Distribution of ``X ^ Z`` with ``Z`` flipping each bit w.p. ``delta``.

    The density's Fourier coefficients are multiplied by ``(1 - 2 delta)**|s|``.
    """
    _check_delta(delta)
    if delta == 0.0:
        return d
    q = damp(d.p, 1.0 - 2.0 * delta)
    if q.min() < -1e-15:
        raise ArithmeticError("noise produced a negative probability")
    q = np.clip(q, 0.0, None)
    return DenseDistribution(d.m, q / q.sum())


def apply_noise_direct(d: DenseDistribution, delta: float, max_bits: int = 12) -> DenseDistribution:
    """Same as :func:`apply_noise` by explicit ``2**m x 2**m`` convolution."""
    _check_delta(delta)
    m = d.m
    if m > max_bits:
        raise DomainError(f"direct convolution limited to m <= {max_bits}")
    x = np.arange(1 << m)
    dist = popcounts(m)[x[:, None] ^ x[None, :]]
    kernel = np.power(delta, dist) * np.power(1.0 - delta, m - dist)
    return DenseDistribution.from_weights(m, kernel.T @ d.p)
