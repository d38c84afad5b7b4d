"""Exact probability vectors over ``{0,1}^m`` and their entropies.

Index ``x`` of the probability vector encodes a string with position 1 as the
most significant bit, so ``p.reshape((2,) * m)`` has axis ``k`` equal to
position ``k + 1``.  A distribution on ``{0,1}^(n+n)`` stores ``(x1, x2)`` at
index ``x1 * 2**n + x2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from ..errors import DomainError, LengthMismatch

MAX_BITS = 24
SUM_TOL = 1e-12

__all__ = [
    "DenseDistribution",
    "MAX_BITS",
    "popcounts",
    "entropy",
    "min_entropy",
    "binary_entropy",
    "marginal",
    "conditional_entropy",
    "conditional_min_entropy",
    "l1_distance",
    "uniform",
    "point_mass",
    "even_parity",
    "uniform_on",
    "random_distribution",
]


@lru_cache(maxsize=32)
def popcounts(m: int) -> np.ndarray:
    """Hamming weights of ``0 .. 2**m - 1``."""
    w = np.zeros(1 << m, dtype=np.int64)
    for b in range(m):
        w[1 << b : 1 << (b + 1)] = w[: 1 << b] + 1
    w.setflags(write=False)
    return w


@dataclass(frozen=True, eq=False)
class DenseDistribution:
    m: int
    p: np.ndarray

    def __post_init__(self):
        if not 0 <= self.m <= MAX_BITS:
            raise DomainError(f"m must lie in [0, {MAX_BITS}]")
        p = np.array(self.p, dtype=np.float64)
        if p.shape != (1 << self.m,):
            raise DomainError(f"expected a vector of length 2**{self.m}")
        if np.any(p < 0):
            raise DomainError("probabilities must be non-negative")
        total = p.sum()
        if abs(total - 1.0) > SUM_TOL:
            raise DomainError(f"probabilities sum to {total!r}")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    @classmethod
    def from_weights(cls, m: int, weights) -> "DenseDistribution":
        w = np.asarray(weights, dtype=np.float64)
        return cls(m, w / w.sum())

    def cube(self) -> np.ndarray:
        return self.p.reshape((2,) * self.m) if self.m else self.p.reshape(())

    def support_size(self) -> int:
        return int(np.count_nonzero(self.p))


def entropy(d: DenseDistribution) -> float:
    """Shannon entropy in bits."""
    q = d.p[d.p > 0]
    return float(-(q * np.log2(q)).sum())


def min_entropy(d: DenseDistribution) -> float:
    return float(-math.log2(d.p.max()))


def binary_entropy(q) -> np.ndarray:
    q = np.asarray(q, dtype=np.float64)
    out = np.zeros_like(q)
    inside = (q > 0) & (q < 1)
    r = q[inside]
    out[inside] = -(r * np.log2(r) + (1 - r) * np.log2(1 - r))
    return out


def _positions(m: int, S: Iterable[int]) -> list[int]:
    idx = sorted(set(int(j) for j in S))
    if idx and (idx[0] < 1 or idx[-1] > m):
        raise DomainError(f"positions must lie in [1, {m}]")
    return idx


def marginal(d: DenseDistribution, S: Iterable[int]) -> DenseDistribution:
    """Distribution of ``X_S`` (positions 1-indexed, kept in increasing order)."""
    keep = _positions(d.m, S)
    drop = tuple(k for k in range(d.m) if k + 1 not in keep)
    q = d.cube().sum(axis=drop) if drop else d.cube()
    return DenseDistribution(len(keep), np.asarray(q).reshape(-1))


def conditional_entropy(d: DenseDistribution, target: Iterable[int], given: Iterable[int]) -> float:
    """``H(X_target | X_given)``."""
    t = _positions(d.m, target)
    g = _positions(d.m, given)
    if set(t) & set(g):
        raise DomainError("target and conditioning positions overlap")
    return entropy(marginal(d, t + g)) - entropy(marginal(d, g))


def conditional_min_entropy(
    d: DenseDistribution, target: Iterable[int], given: Sequence[int], value: Sequence[int]
) -> float:
    """Min-entropy of ``X_target`` conditioned on the event ``X_given = value``."""
    t = _positions(d.m, target)
    g = list(given)
    if len(g) != len(value) or set(g) & set(t):
        raise DomainError("bad conditioning event")
    cube = d.cube()
    index = [slice(None)] * d.m
    for pos, bit in zip(g, value):
        index[pos - 1] = int(bit)
    sub = cube[tuple(index)]
    # remaining axes are the free positions in increasing order
    free = [k + 1 for k in range(d.m) if k + 1 not in g]
    drop = tuple(a for a, pos in enumerate(free) if pos not in t)
    q = np.asarray(sub.sum(axis=drop) if drop else sub).reshape(-1)
    mass = q.sum()
    if mass <= 0:
        raise DomainError("conditioning event has probability zero")
    return float(-math.log2(q.max() / mass))


def l1_distance(d1: DenseDistribution, d2: DenseDistribution) -> float:
    """Plain sum of absolute differences (twice the total variation distance)."""
    if d1.m != d2.m:
        raise LengthMismatch("distributions live on different cubes")
    return float(np.abs(d1.p - d2.p).sum())


# --- constructors ----------------------------------------------------------------------


def uniform(m: int) -> DenseDistribution:
    return DenseDistribution(m, np.full(1 << m, 1.0 / (1 << m)))


def point_mass(m: int, x: int = 0) -> DenseDistribution:
    p = np.zeros(1 << m)
    p[x] = 1.0
    return DenseDistribution(m, p)


def even_parity(m: int) -> DenseDistribution:
    """Uniform over the strings of even Hamming weight."""
    mask = (popcounts(m) % 2 == 0).astype(np.float64)
    return DenseDistribution.from_weights(m, mask)


def uniform_on(m: int, support) -> DenseDistribution:
    idx = np.unique(np.asarray(list(support) if not isinstance(support, np.ndarray) else support, dtype=np.int64))
    if idx.size == 0:
        raise DomainError("support must be non-empty")
    if idx[0] < 0 or idx[-1] >= 1 << m:
        raise DomainError("support element outside the cube")
    p = np.zeros(1 << m)
    p[idx] = 1.0 / idx.size
    return DenseDistribution(m, p)


def random_distribution(m: int, rng: np.random.Generator, sparse: bool = False) -> DenseDistribution:
    """Normalised independent positive weights; ``sparse`` keeps a random-size random support."""
    w = rng.exponential(size=1 << m)
    if sparse:
        k = int(rng.integers(1, (1 << m) + 1))
        keep = np.zeros(1 << m, dtype=bool)
        keep[rng.choice(1 << m, size=k, replace=False)] = True
        w = np.where(keep, w, 0.0)
    return DenseDistribution.from_weights(m, w)
