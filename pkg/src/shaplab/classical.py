"""One-way classical protocol based on shared random samples.

Shared randomness picks two uniform ``k``-subsets ``S1, S2`` of the positions.
Alice sends ``x1`` on ``S1`` and ``x2`` on ``S2`` (``2k`` bits).  For each shift
``i`` Bob looks at the positions ``j`` in ``S2`` whose partner ``j - i`` lies in
``S1``, estimates the shifted XOR weight on those pairs, and answers 1 iff the
smallest estimate is at most ``theta``.  With ``k ~ sqrt(n ln n)`` every shift
sees about ``ln n`` pairs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import _kernels
from .errors import DomainError
from .problem import ShapInstance

__all__ = [
    "SamplingConfig",
    "SamplingTrial",
    "DEFAULT_THETA",
    "sample_budget",
    "run_sampling_protocol",
    "sampling_trial",
    "expected_collisions",
]

DEFAULT_THETA = 13 / 30
DEFAULT_C = 6.0


def sample_budget(n: int, c: float) -> int:
    """``min(n, ceil(c * sqrt(n ln n)))``, at least 1."""
    raw = math.ceil(c * math.sqrt(n * math.log(n))) if n > 1 else 1
    return max(1, min(n, raw))


@dataclass(frozen=True)
class SamplingConfig:
    n: int
    k: Optional[int] = None
    theta: float = DEFAULT_THETA
    c: float = DEFAULT_C

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("n must be positive")
        if self.k is not None and not 0 < self.k <= self.n:
            raise DomainError(f"k must lie in (0, n], got {self.k}")
        if not Fraction(2, 5) < Fraction(repr(self.theta)) < Fraction(7, 15):
            raise DomainError("theta must lie strictly between 2/5 and 7/15")
        if self.k is None and self.c <= 0:
            raise DomainError("c must be positive")

    @property
    def samples(self) -> int:
        return self.k if self.k is not None else sample_budget(self.n, self.c)

    @property
    def cost_bits(self) -> int:
        """One-way message length; Bob sends nothing."""
        return 2 * self.samples


@dataclass(frozen=True)
class SamplingTrial:
    answer: int
    min_estimate: float
    overlaps: np.ndarray  # |C_i| per shift
    estimates: np.ndarray  # w_hat_i per shift


def sampling_trial(inst: ShapInstance, cfg: SamplingConfig, rng: np.random.Generator) -> SamplingTrial:
    n = inst.n
    if n != cfg.n:
        raise DomainError("instance length does not match the configuration")
    k = cfg.samples
    s1 = np.sort(rng.choice(n, size=k, replace=False))
    s2 = np.sort(rng.choice(n, size=k, replace=False)).astype(np.int64)

    # Alice's message: x1 on S1, x2 on S2.  Bob folds in his own bits; nothing
    # outside the sampled positions is visible to him.
    in_s1 = np.zeros(n, dtype=np.uint8)
    in_s1[s1] = 1
    d = np.zeros(n, dtype=np.uint8)
    d[s1] = inst.x1.to_array()[s1] ^ inst.y1.to_array()[s1]
    e = np.zeros(n, dtype=np.uint8)
    e[s2] = inst.x2.to_array()[s2] ^ inst.y2.to_array()[s2]

    counts, ones = _kernels.sampled_estimates(d, in_s1, e, s2)
    est = np.full(n, 0.5)
    seen = counts > 0
    est[seen] = ones[seen] / counts[seen]
    # exact rational comparison ones / counts <= theta
    th = Fraction(repr(cfg.theta))
    hit = seen & (ones * th.denominator <= counts * th.numerator)
    return SamplingTrial(int(hit.any()), float(est.min()), counts, est)


def run_sampling_protocol(inst: ShapInstance, cfg: SamplingConfig, rng: np.random.Generator) -> int:
    return sampling_trial(inst, cfg, rng).answer


def expected_collisions(n: int, k: int) -> float:
    """Expected ``|C_i|`` for independent uniform ``k``-subsets: ``k**2 / n``."""
    if not 0 <= k <= n:
        raise DomainError("k must lie in [0, n]")
    return k * k / n
