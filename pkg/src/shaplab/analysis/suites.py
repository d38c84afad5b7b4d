"""Randomised verification suites over the inequality checkers.

Each suite draws its inputs from ``trial_rng(seed, trial, stream)`` so a run is
reproducible trial by trial, whatever order the trials execute in.
"""
from __future__ import annotations

from typing import Callable

import numpy as np

from ..errors import DomainError
from ..seeding import trial_rng
from .dense import DenseDistribution, random_distribution
from .fourier import apply_noise, apply_noise_direct
from .verifiers import (
    VerifierReport,
    verify_hypercontractive,
    verify_kkl,
    verify_l1_entropy,
    verify_lhyp,
    verify_minentropy_chain,
    verify_ndist,
)

__all__ = ["SUITES", "random_test_distribution", "run_suite", "suite_trial", "HYPER_GRID"]

CHAIN_DELTAS = (0.0, 1.0, 2.0, 4.0)
KKL_DELTAS = (0.0, 0.25, 0.5, 1.0)
HYPER_GRID = ((1.0, 1.0), (1.0, 2.0), (4 / 3, 2.0), (1.5, 3.0), (2.0, 2.0), (2.0, 4.0), (3.0, 6.0), (1.2, 8.0))


def random_test_distribution(m: int, rng: np.random.Generator) -> DenseDistribution:
    """A distribution from a mixture of shapes that exercise different regimes.

    Shapes: dense exponential weights, random sparse support, biased product,
    uniform on a random affine subcube, and a peaked mixture.
    """
    kind = int(rng.integers(0, 5))
    size = 1 << m
    if kind == 0:
        return random_distribution(m, rng)
    if kind == 1:
        return random_distribution(m, rng, sparse=True)
    if kind == 2:
        bias = rng.uniform(0.0, 1.0, size=m)
        bits = (np.arange(size)[:, None] >> (m - 1 - np.arange(m))[None, :]) & 1
        p = np.prod(np.where(bits == 1, bias, 1.0 - bias), axis=1)
        if p.sum() <= 0:
            return random_distribution(m, rng)
        return DenseDistribution.from_weights(m, p)
    if kind == 3:
        mask = int(rng.integers(0, size))
        base = int(rng.integers(0, size))
        x = np.arange(size)
        return DenseDistribution.from_weights(m, ((x & mask) == (base & mask)).astype(np.float64))
    w = rng.exponential(size=size) ** 4
    return DenseDistribution.from_weights(m, w)


def _chain(rng, n_max):
    m = int(rng.integers(2, min(10, n_max) + 1))
    nu = random_test_distribution(m, rng)
    split = int(rng.integers(1, m))
    out = []
    for d in CHAIN_DELTAS:
        out.extend(verify_minentropy_chain(nu, split, d))
    return out


def _l1(rng, n_max):
    m = int(rng.integers(1, min(10, n_max) + 1))
    a = random_test_distribution(m, rng)
    if rng.random() < 0.5:
        # a nearby distribution keeps the distance small
        eps = rng.uniform(0.0, 0.2)
        b = DenseDistribution.from_weights(m, (1 - eps) * a.p + eps * random_test_distribution(m, rng).p)
    else:
        b = random_test_distribution(m, rng)
    return [verify_l1_entropy(a, b)]


def _random_function(m: int, rng: np.random.Generator) -> np.ndarray:
    kind = int(rng.integers(0, 3))
    if kind == 0:
        return rng.standard_normal(1 << m)
    if kind == 1:
        f = rng.exponential(size=1 << m)
        f[rng.random(1 << m) < rng.uniform(0.0, 0.95)] = 0.0
        if not f.any():
            f[int(rng.integers(0, 1 << m))] = 1.0
        return f
    return (rng.random(1 << m) < rng.uniform(0.01, 0.5)).astype(np.float64) + 0.0


def _hyper(rng, n_max):
    m = min(8, n_max)
    f = _random_function(m, rng)
    return [verify_hypercontractive(f, p, q) for p, q in HYPER_GRID]


def _kkl(rng, n_max):
    m = min(10, n_max)
    f = np.abs(_random_function(m, rng))
    if not f.any():
        f[0] = 1.0
    out = []
    for d in KKL_DELTAS:
        out.extend(verify_kkl(f, d, 2))
    return out


def _lhyp(rng, n_max):
    hi = min(12, n_max)
    if hi < 4:
        raise DomainError("lhyp needs n_max >= 4")
    n = int(rng.integers(4, hi + 1))
    return verify_lhyp(random_test_distribution(n, rng))


def _ndist(rng, n_max):
    n = min(9, n_max)
    return verify_ndist(random_test_distribution(n, rng))


def _noise(rng, n_max):
    m = int(rng.integers(1, min(10, n_max) + 1))
    nu = random_test_distribution(m, rng)
    delta = float(rng.choice([0.0, 0.125, 0.25, 0.375, 0.5]))
    gap = float(np.abs(apply_noise(nu, delta).p - apply_noise_direct(nu, delta).p).max())
    twice = apply_noise(apply_noise(nu, 0.25), 0.25)
    comp = float(np.abs(twice.p - apply_noise(nu, 0.375).p).max())
    return [
        VerifierReport("noise_multiplier_vs_convolution", gap, 1e-12, dict(m=m, delta=delta)),
        VerifierReport("noise_composition", comp, 1e-12, dict(m=m)),
    ]


SUITES: dict[str, Callable] = {
    "minentropy_chain": _chain,
    "l1_entropy": _l1,
    "hypercontractive": _hyper,
    "kkl": _kkl,
    "lhyp": _lhyp,
    "ndist": _ndist,
    "noise": _noise,
}


def suite_trial(name: str, seed: int, trial: int, n_max: int = 10) -> list[VerifierReport]:
    if name not in SUITES:
        raise DomainError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    stream = list(SUITES).index(name)
    return SUITES[name](trial_rng(seed, trial, stream), n_max)


def run_suite(name: str, seed: int, trials: int, n_max: int = 10) -> list[VerifierReport]:
    out = []
    for k in range(trials):
        out.extend(suite_trial(name, seed, k, n_max))
    return out

