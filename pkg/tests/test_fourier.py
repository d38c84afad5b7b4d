from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from shaplab.analysis.dense import DenseDistribution, point_mass, uniform
from shaplab.analysis.fourier import (
    apply_noise,
    apply_noise_direct,
    character,
    damp,
    inverse_wht,
    noise_multiplier,
    norm,
    wht,
)
from shaplab.errors import DomainError


def test_wht_of_character():
    m = 4
    for s in (0, 3, 9, 15):
        spec = wht(character(m, s))
        expected = np.zeros(1 << m)
        expected[s] = 1.0
        np.testing.assert_allclose(spec.coeffs, expected, atol=1e-15)


def test_wht_constant_and_inverse(rng):
    f = rng.standard_normal(32)
    spec = wht(f)
    assert spec.coeffs[0] == pytest.approx(f.mean())
    np.testing.assert_allclose(inverse_wht(spec), f, atol=1e-12)
    # Parseval in the expectation convention
    assert spec.weight() == pytest.approx(np.mean(f**2))
    assert spec.degree_profile().sum() == pytest.approx(spec.weight())


def test_norms():
    f = np.array([1.0, -3.0, 0.0, 2.0])
    assert norm(f, 1) == pytest.approx(1.5)
    assert norm(f, 2) == pytest.approx(np.sqrt(14 / 4))
    assert norm(f, np.inf) == 3.0
    with pytest.raises(DomainError):
        norm(f, 0)


def test_noise_multiplier():
    assert noise_multiplier(2, 0.5).tolist() == [1.0, 0.5, 0.5, 0.25]
    assert noise_multiplier(2, 0.0).tolist() == [1.0, 0.0, 0.0, 0.0]


def test_noise_on_point_mass():
    d = apply_noise(point_mass(2, 0), 0.25)
    np.testing.assert_allclose(d.p, [9 / 16, 3 / 16, 3 / 16, 1 / 16], atol=1e-15)
    np.testing.assert_allclose(apply_noise(point_mass(3, 5), 0.5).p, uniform(3).p, atol=1e-15)


def test_noise_rejects_bad_rate():
    with pytest.raises(DomainError):
        apply_noise(uniform(2), 0.6)


@pytest.mark.parametrize("m", [1, 4, 8, 10])
@pytest.mark.parametrize("delta", [0.0, 0.1, 0.25, 0.375, 0.5])
def test_multiplier_equals_convolution(rng, m, delta):
    d = DenseDistribution.from_weights(m, rng.exponential(size=1 << m))
    assert np.max(np.abs(apply_noise(d, delta).p - apply_noise_direct(d, delta).p)) <= 1e-12


def test_composition_exact_multipliers():
    # (1 - 2 (1/4))^2 = 1 - 2 (3/8)
    assert (1 - 2 * Fraction(1, 4)) ** 2 == 1 - 2 * Fraction(3, 8)
    assert np.array_equal(noise_multiplier(6, 0.5) ** 2, noise_multiplier(6, 0.25))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_composition_law(m, seed):
    rng = np.random.default_rng(seed)
    d = DenseDistribution.from_weights(m, rng.exponential(size=1 << m))
    twice = apply_noise(apply_noise(d, 0.25), 0.25)
    assert np.max(np.abs(twice.p - apply_noise(d, 0.375).p)) <= 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 8), st.floats(0, 1), st.integers(0, 2**32 - 1))
def test_damp_contracts_norm(m, rho, seed):
    f = np.random.default_rng(seed).standard_normal(1 << m)
    assert norm(damp(f, rho), 2) <= norm(f, 2) + 1e-12


def test_direct_limit():
    with pytest.raises(DomainError):
        apply_noise_direct(uniform(13), 0.1)
