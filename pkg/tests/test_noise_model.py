"""Noise-process tests: affine posterior/prior maps, label corruption,
and sign preservation under uniform noise."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from labelnoise import (
    GaussianSetup,
    NoiseSpec,
    ParameterError,
    corrupt_labels,
    generate,
    noisy_posterior,
    noisy_prior,
    un_sign_preserved,
)

probs = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
taus = st.floats(min_value=0.0, max_value=0.4999, allow_nan=False)


def ccn_rates():
    return st.tuples(
        st.floats(min_value=0.0, max_value=0.98),
        st.floats(min_value=0.0, max_value=0.98),
    ).filter(lambda ab: ab[0] + ab[1] < 1.0)


class TestNoisySpec:
    def test_uniform_bounds(self):
        NoiseSpec.uniform(0.0)
        NoiseSpec.uniform(0.49)
        with pytest.raises(ParameterError):
            NoiseSpec.uniform(0.5)
        with pytest.raises(ParameterError):
            NoiseSpec.uniform(-0.01)

    def test_ccn_bounds(self):
        NoiseSpec.class_conditional(0.0, 0.0)
        NoiseSpec.class_conditional(0.3, 0.69)
        with pytest.raises(ParameterError):
            NoiseSpec.class_conditional(0.5, 0.5)
        with pytest.raises(ParameterError):
            NoiseSpec.class_conditional(-0.1, 0.2)

    def test_dict_round_trip(self):
        for spec in (NoiseSpec.uniform(0.3), NoiseSpec.class_conditional(0.2, 0.1)):
            assert NoiseSpec.from_dict(spec.to_dict()) == spec


class TestNoisyPosterior:
    def test_uniform_fixed_point_at_half(self):
        assert noisy_posterior(0.5, NoiseSpec.uniform(0.3)) == 0.5

    def test_boxed_cases(self):
        spec = NoiseSpec.class_conditional(0.2, 0.1)
        assert noisy_posterior(1.0, spec) == pytest.approx(0.8, rel=1e-12)
        assert noisy_posterior(0.5, spec) == pytest.approx(0.45, rel=1e-12)
        assert noisy_posterior(0.0, spec) == pytest.approx(0.1, rel=1e-12)

    def test_rejects_eta_outside_unit_interval(self):
        with pytest.raises(ParameterError):
            noisy_posterior(1.2, NoiseSpec.uniform(0.1))

    @given(eta=probs, rates=ccn_rates())
    def test_output_in_affine_range(self, eta, rates):
        alpha, beta = rates
        spec = NoiseSpec.class_conditional(alpha, beta)
        out = noisy_posterior(eta, spec)
        lo, hi = min(beta, 1.0 - alpha), max(beta, 1.0 - alpha)
        assert lo - 1e-12 <= out <= hi + 1e-12

    @given(eta=probs, tau=taus)
    def test_ccn_with_equal_rates_matches_uniform_bitwise(self, eta, tau):
        un = noisy_posterior(eta, NoiseSpec.uniform(tau))
        ccn = noisy_posterior(eta, NoiseSpec.class_conditional(tau, tau))
        assert un == ccn

    @given(tau=taus)
    def test_fixed_point_at_half_within_ulp(self, tau):
        # bit-exact on decimal grids; within one spacing for arbitrary floats
        out = noisy_posterior(0.5, NoiseSpec.uniform(tau))
        assert out == pytest.approx(0.5, abs=1e-15)

    def test_vectorized(self):
        spec = NoiseSpec.class_conditional(0.2, 0.1)
        etas = np.linspace(0.0, 1.0, 11)
        out = noisy_posterior(etas, spec)
        assert out.shape == etas.shape
        assert np.allclose(out, 0.7 * etas + 0.1)


class TestNoisyPrior:
    def test_hand_values(self):
        assert noisy_prior(0.5, NoiseSpec.class_conditional(0.2, 0.1)) == \
            pytest.approx(0.45, rel=1e-12)
        assert noisy_prior(0.5, NoiseSpec.uniform(0.25)) == 0.5
        assert noisy_prior(0.3, NoiseSpec.class_conditional(0.0, 0.0)) == 0.3

    def test_matches_expected_noisy_posterior_monte_carlo(self):
        # the prior map must equal the data-average of the posterior map
        setup = GaussianSetup()
        data = generate(setup, 100_000, seed=404)
        etas = np.array([setup.true_posterior(x) for x in data.features])
        spec = NoiseSpec.class_conditional(0.2, 0.05)
        mc = float(np.mean(noisy_posterior(etas, spec)))
        assert mc == pytest.approx(noisy_prior(0.5, spec), abs=0.01)


class TestCorruptLabels:
    def test_zero_noise_identity(self):
        y = np.array([1, -1, 1, 1, -1])
        out = corrupt_labels(y, NoiseSpec.class_conditional(0.0, 0.0), seed=3)
        assert np.array_equal(out, y)

    def test_flip_rates_converge(self):
        n = 100_000
        spec = NoiseSpec.class_conditional(0.2, 0.1)
        pos = corrupt_labels(np.ones(n, dtype=int), spec, seed=11)
        assert np.mean(pos == -1) == pytest.approx(0.2, abs=0.005)
        neg = corrupt_labels(-np.ones(n, dtype=int), NoiseSpec.uniform(0.3), seed=12)
        assert np.mean(neg == 1) == pytest.approx(0.3, abs=0.005)

    def test_seed_reproducibility(self):
        y = np.where(np.arange(1000) % 3 == 0, 1, -1)
        spec = NoiseSpec.class_conditional(0.25, 0.05)
        a = corrupt_labels(y, spec, seed=99)
        b = corrupt_labels(y, spec, seed=99)
        c = corrupt_labels(y, spec, seed=100)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_per_class_rates(self):
        rng = np.random.default_rng(0)
        y = np.where(rng.random(200_000) < 0.5, 1, -1)
        spec = NoiseSpec.class_conditional(0.3, 0.05)
        out = corrupt_labels(y, spec, seed=5)
        flipped_pos = np.mean(out[y == 1] == -1)
        flipped_neg = np.mean(out[y == -1] == 1)
        assert flipped_pos == pytest.approx(0.3, abs=0.005)
        assert flipped_neg == pytest.approx(0.05, abs=0.005)

    def test_empty_rejected(self):
        with pytest.raises(ParameterError):
            corrupt_labels(np.array([]), NoiseSpec.uniform(0.1), seed=0)

    def test_bad_labels_rejected(self):
        with pytest.raises(ParameterError):
            corrupt_labels(np.array([0, 1]), NoiseSpec.uniform(0.1), seed=0)


class TestSignPreservation:
    def test_simple_cases(self):
        assert un_sign_preserved(0.9, 0.49)
        assert un_sign_preserved(0.1, 0.3)

    def test_exhaustive_grid(self):
        for eta in np.round(np.arange(1, 100) / 100, 2):
            for tau in np.round(np.arange(0, 50) / 100, 2):
                assert un_sign_preserved(float(eta), float(tau))

    def test_tau_out_of_range(self):
        with pytest.raises(ParameterError):
            un_sign_preserved(0.7, 0.5)
