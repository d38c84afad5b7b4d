import math

import numpy as np
import pytest

from shaplab.bits import BitString
from shaplab.classical import (
    DEFAULT_THETA,
    SamplingConfig,
    expected_collisions,
    run_sampling_protocol,
    sample_budget,
    sampling_trial,
)
from shaplab.errors import DomainError
from shaplab.problem import DistributionSpec, PromiseClass, ShapInstance, all_shift_weights, classify, sample


@pytest.mark.parametrize(
    "n, c, expected",
    [
        (16, 6.0, 16),  # clamped: raw budget is 40
        (64, 6.0, 64),
        (1000, 1.0, 84),  # ceil(sqrt(1000 ln 1000)) = 84
        (10_000, 1.0, 304),
        (1, 6.0, 1),
    ],
)
def test_sample_budget(n, c, expected):
    assert sample_budget(n, c) == expected


def test_config():
    cfg = SamplingConfig(100, k=10)
    assert cfg.samples == 10 and cfg.cost_bits == 20
    assert SamplingConfig(1000, c=1.0).cost_bits == 168
    with pytest.raises(DomainError):
        SamplingConfig(10, k=11)
    with pytest.raises(DomainError):
        SamplingConfig(10, theta=0.5)
    with pytest.raises(DomainError):
        SamplingConfig(10, theta=0.4)


def test_full_sampling_sees_exact_weights(rng):
    """With k = n every shift sees all n pairs, so the estimates are w_i / n."""
    for _ in range(20):
        inst = ShapInstance.random(30, rng)
        trial = sampling_trial(inst, SamplingConfig(30, k=30), rng)
        assert trial.overlaps.tolist() == [30] * 30
        np.testing.assert_allclose(trial.estimates, all_shift_weights(inst) / 30)
        if classify(inst) is not PromiseClass.UNDEFINED:
            assert trial.answer == classify(inst).value


def test_theta_comparison_is_exact():
    # estimate 13/30 exactly equals theta and must count as a hit
    n = 30
    d = BitString.from_bits([1] * 13 + [0] * 17)
    inst = ShapInstance(d, BitString.zeros(n), BitString.zeros(n), BitString.zeros(n))
    # make every other shift far away: only shift 0 matters for the minimum here
    trial = sampling_trial(inst, SamplingConfig(n, k=n), np.random.default_rng(0))
    assert trial.min_estimate == pytest.approx(DEFAULT_THETA)
    assert trial.answer == 1


def test_estimates_unbiased(rng):
    inst = ShapInstance.random(50, rng)
    truth = all_shift_weights(inst) / 50
    cfg = SamplingConfig(50, k=20)
    acc = np.zeros(50)
    reps = 400
    for _ in range(reps):
        tr = sampling_trial(inst, cfg, rng)
        acc += np.where(tr.overlaps > 0, tr.estimates, truth)
    assert np.max(np.abs(acc / reps - truth)) < 0.06


def test_expected_collisions(rng):
    n, k = 100, 20
    assert expected_collisions(n, k) == 4.0
    counts = [sampling_trial(ShapInstance.random(n, rng), SamplingConfig(n, k=k), rng).overlaps.mean() for _ in range(300)]
    assert abs(np.mean(counts) - 4.0) < 0.1


def test_planted_detected(rng):
    cfg = SamplingConfig(200)
    hits = sum(run_sampling_protocol(sample(DistributionSpec("mu1", 200, noise=0.0), rng), cfg, rng) for _ in range(30))
    assert hits == 30


def test_length_checked(rng):
    with pytest.raises(DomainError):
        sampling_trial(ShapInstance.random(5, rng), SamplingConfig(6), rng)
