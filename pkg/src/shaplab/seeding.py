"""Deterministic, splittable random generators.

Every stochastic routine in shaplab takes an explicit ``numpy.random.Generator``.
Trial-level parallelism derives one generator per ``(seed, trial)`` pair so that
results do not depend on scheduling.
"""
from __future__ import annotations

import numpy as np


def make_rng(seed: int, *path: int) -> np.random.Generator:
    """Generator for ``seed`` at the child position ``path`` of its seed tree."""
    if seed < 0 or any(p < 0 for p in path):
        raise ValueError("seed and path components must be non-negative")
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(path))
    return np.random.Generator(np.random.PCG64(ss))


def trial_rng(seed: int, trial: int, stream: int = 0) -> np.random.Generator:
    return make_rng(seed, stream, trial)
