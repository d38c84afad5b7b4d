"""Rectangles, their bias under the hard distributions, and shifted-XOR entropies.

An element of ``{0,1}^(2n)`` is an integer ``x1 * 2**n + x2`` (the ``x1`` half
in the high bits, position 1 most significant).  For shift ``i`` it maps to
``u_i(x1, x2) = shift(x1, i) ^ x2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from ..errors import DomainError
from .dense import DenseDistribution, entropy, min_entropy, popcounts, uniform_on
from .fourier import apply_noise

__all__ = [
    "RectanglePair",
    "RectangleBias",
    "LBoundEvaluation",
    "shifted_xor",
    "shift_xor_distribution",
    "shift_xor_entropies",
    "rectangle_bias",
    "rectangle_entropy_condition",
    "lbound_evaluator",
    "fixed_positions_set",
    "even_parity_pairs",
]


def _rotate(v: np.ndarray, i: int, n: int) -> np.ndarray:
    if i == 0:
        return v
    mask = (1 << n) - 1
    return ((v >> i) | (v << (n - i))) & mask


def shifted_xor(elems: np.ndarray, n: int, i: int) -> np.ndarray:
    """``u_i`` applied to packed ``(x1, x2)`` elements."""
    elems = np.asarray(elems, dtype=np.int64)
    x1 = elems >> n
    x2 = elems & ((1 << n) - 1)
    return _rotate(x1, i, n) ^ x2


@dataclass(frozen=True, eq=False)
class RectanglePair:
    n: int
    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n <= 10:
            raise DomainError("rectangles are limited to 1 <= n <= 10")
        for name in ("A", "B"):
            s = np.unique(np.asarray(getattr(self, name), dtype=np.int64))
            if s.size == 0:
                raise DomainError(f"{name} must be non-empty")
            if s[0] < 0 or s[-1] >= 1 << (2 * self.n):
                raise DomainError(f"{name} has an element outside {{0,1}}^(2n)")
            s.setflags(write=False)
            object.__setattr__(self, name, s)

    @classmethod
    def full(cls, n: int) -> "RectanglePair":
        every = np.arange(1 << (2 * n))
        return cls(n, every, every)

    @classmethod
    def from_instances(cls, instances: Iterable) -> "RectanglePair":
        """``A`` from the ``(x1, x2)`` halves and ``B`` from the ``(y1, y2)`` halves."""
        inst = list(instances)
        if not inst:
            raise DomainError("no instances given")
        n = inst[0].n
        A = [(s.x1.value << n) | s.x2.value for s in inst]
        B = [(s.y1.value << n) | s.y2.value for s in inst]
        return cls(n, np.array(A), np.array(B))


@dataclass(frozen=True)
class RectangleBias:
    mu0_mass: Fraction
    mu1_mass: Fraction

    @property
    def ratio(self) -> Optional[Fraction]:
        return self.mu1_mass / self.mu0_mass if self.mu0_mass else None


def rectangle_bias(rect: RectanglePair) -> RectangleBias:
    """Exact masses of ``A x B`` under the uniform and the noisy planted distribution.

    The planted mass averages, over shifts, the sum of
    ``2**(-3n) (3/8)**w (5/8)**(n-w)`` with ``w = |u_i(a) ^ u_i(b)|``.
    """
    n = rect.n
    if n > 6:
        raise DomainError("exact rectangle masses are limited to n <= 6")
    size = 1 << n
    z = np.arange(size)
    w = popcounts(n)[z[:, None] ^ z[None, :]]
    kernel = (3 ** w) * (5 ** (n - w))  # fits int64 for n <= 6
    total = 0
    for i in range(n):
        ha = np.bincount(shifted_xor(rect.A, n, i), minlength=size).astype(np.int64)
        hb = np.bincount(shifted_xor(rect.B, n, i), minlength=size).astype(np.int64)
        total += int(ha @ kernel @ hb)
    mu1 = Fraction(total, n * 8**n * 2 ** (3 * n))
    mu0 = Fraction(rect.A.size * rect.B.size, 2 ** (4 * n))
    return RectangleBias(mu0, mu1)


def shift_xor_distribution(nu: DenseDistribution, i: int) -> DenseDistribution:
    """Distribution of ``shift(X1, i) ^ X2`` for ``(X1, X2) ~ nu`` on ``{0,1}^(n+n)``."""
    if nu.m % 2:
        raise DomainError("need a distribution on an even number of bits")
    n = nu.m // 2
    if not 0 <= i < n:
        raise DomainError("shift outside [0, n)")
    keys = shifted_xor(np.arange(1 << nu.m), n, i)
    return DenseDistribution(n, np.bincount(keys, weights=nu.p, minlength=1 << n))


def shift_xor_entropies(nu: DenseDistribution, noise: float = 0.25) -> np.ndarray:
    """``H(shift(X1, i) ^ T_noise(X2))`` for every shift ``i``.

    Noise on ``X2`` commutes with the XOR, so it is applied to the XOR's
    distribution.
    """
    n = nu.m // 2
    return np.array([entropy(apply_noise(shift_xor_distribution(nu, i), noise)) for i in range(n)])


def rectangle_entropy_condition(A, n: int, noise: float = 0.25) -> float:
    """``E_i H(shift(X1, i) ^ T_{1/4}(X2))`` for ``(X1, X2)`` uniform on ``A``."""
    if not 1 <= n <= 14:
        raise DomainError("limited to 1 <= n <= 14")
    elems = np.unique(np.asarray(A, dtype=np.int64))
    if elems.size == 0:
        raise DomainError("A must be non-empty")
    vals = []
    for i in range(n):
        hist = np.bincount(shifted_xor(elems, n, i), minlength=1 << n).astype(np.float64)
        vals.append(entropy(apply_noise(DenseDistribution(n, hist / hist.sum()), noise)))
    return float(np.mean(vals))


@dataclass(frozen=True)
class LBoundEvaluation:
    n: int
    condition_value: float
    delta: float
    minentropy: float
    bound_rhs: float

    @property
    def condition_met(self) -> bool:
        return self.delta > 1e-12

    @property
    def consistent(self) -> bool:
        """False only for a counterexample: condition met, conclusion violated."""
        return not self.condition_met or self.minentropy <= self.bound_rhs + 1e-9


def lbound_evaluator(nu: DenseDistribution) -> LBoundEvaluation:
    """Evaluate the noisy shifted-XOR condition and the min-entropy conclusion on ``nu``.

    ``delta`` is the largest value for which the condition holds; the bound
    ``2n - sqrt(delta n) / 29`` is the strongest conclusion it yields.
    """
    if nu.m % 2 or not 2 <= nu.m <= 20:
        raise DomainError("need a distribution on {0,1}^(n+n) with n <= 10")
    n = nu.m // 2
    cond = float(np.mean(shift_xor_entropies(nu, 0.25)))
    delta = n - cond
    rhs = 2 * n - math.sqrt(max(delta, 0.0) * n) / 29
    return LBoundEvaluation(n, cond, delta, min_entropy(nu), rhs)


# --- set constructors ----------------------------------------------------------------------


def fixed_positions_set(n: int, x1_positions=(), x2_positions=()) -> np.ndarray:
    """All ``(x1, x2)`` with zeros at the given 1-indexed positions of each half."""
    mask = 0
    for j in x1_positions:
        mask |= 1 << (2 * n - j)
    for j in x2_positions:
        mask |= 1 << (n - j)
    every = np.arange(1 << (2 * n), dtype=np.int64)
    return every[(every & mask) == 0]


def even_parity_pairs(n: int) -> np.ndarray:
    every = np.arange(1 << (2 * n), dtype=np.int64)
    return every[popcounts(2 * n)[every] % 2 == 0]


def uniform_on_pairs(n: int, A) -> DenseDistribution:
    return uniform_on(2 * n, A)
