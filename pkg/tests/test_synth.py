"""Synthetic benchmark tests: the closed-form true model, anchor
constructions, and reproducibility of generated artifacts."""

import numpy as np
import pytest
from scipy.stats import kstest

from labelnoise import (
    GaussianSetup,
    ParameterError,
    boundary_point,
    fit,
    generate,
    sample_anchors,
    save_dataset,
)


class TestGaussianSetup:
    def test_default_true_theta(self):
        setup = GaussianSetup()
        np.testing.assert_array_equal(setup.theta_true, [0.0, 2.0, 2.0])

    def test_asymmetric_means_and_prior(self):
        setup = GaussianSetup(np.array([2.0, 0.0]), np.array([0.0, 0.0]), 0.25)
        b, w1, w2 = setup.theta_true
        assert (w1, w2) == (2.0, 0.0)
        assert b == pytest.approx(np.log(0.25 / 0.75) - 2.0, rel=1e-12)

    def test_true_posterior_is_bayes_posterior(self):
        # oracle: posterior from the two Gaussian densities directly
        setup = GaussianSetup()
        rng = np.random.default_rng(8)
        for _ in range(100):
            x = rng.uniform(-3, 3, size=2)
            log_num = -0.5 * np.sum((x - setup.mean_pos) ** 2)
            log_den = -0.5 * np.sum((x - setup.mean_neg) ** 2)
            bayes = 1.0 / (1.0 + np.exp(log_den - log_num))
            model_val = setup.true_posterior(np.concatenate([[1.0], x]))
            assert model_val == pytest.approx(bayes, rel=1e-10)

    def test_validation(self):
        with pytest.raises(ParameterError):
            GaussianSetup(np.array([1.0]), np.array([1.0, 2.0]))
        with pytest.raises(ParameterError):
            GaussianSetup(prior=0.0)
        with pytest.raises(ParameterError):
            GaussianSetup(np.array([1.0, 1.0]), np.array([1.0, 1.0]))


class TestGenerate:
    def test_class_balance(self):
        data = generate(GaussianSetup(), 100_000, seed=21)
        assert np.mean(data.labels > 0) == pytest.approx(0.5, abs=0.01)

    def test_class_means(self):
        data = generate(GaussianSetup(), 100_000, seed=22)
        pos = data.features[data.labels > 0, 1:]
        assert np.allclose(pos.mean(axis=0), [1.0, 1.0], atol=0.02)
        neg = data.features[data.labels < 0, 1:]
        assert np.allclose(neg.mean(axis=0), [-1.0, -1.0], atol=0.02)

    def test_seed_determinism_down_to_csv_bytes(self, tmp_path):
        a = generate(GaussianSetup(), 200, seed=7)
        b = generate(GaussianSetup(), 200, seed=7)
        np.testing.assert_array_equal(a.features, b.features)
        np.testing.assert_array_equal(a.labels, b.labels)
        pa, pb = tmp_path / "a.csv", tmp_path / "b.csv"
        save_dataset(a, pa)
        save_dataset(b, pb)
        assert pa.read_bytes() == pb.read_bytes()

    def test_fit_error_shrinks_with_n(self):
        setup = GaussianSetup()
        errs = {}
        for n in (500, 8000):
            coord_err = []
            for rep in range(30):
                model = fit(generate(setup, n, seed=1000 * n + rep))
                coord_err.append(np.abs(model.theta - setup.theta_true))
            errs[n] = np.mean(coord_err, axis=0)
        ratio = errs[500] / errs[8000]
        # 16x data should shrink each coordinate error about 4x
        assert np.all(ratio > 2.0) and np.all(ratio < 8.0)

    def test_minimum_size(self):
        with pytest.raises(ParameterError):
            generate(GaussianSetup(), 1, seed=0)


class TestAnchors:
    def test_boundary_point_at_origin_parameter(self):
        np.testing.assert_array_equal(
            boundary_point(GaussianSetup(), [0.0]), [1.0, 0.0, 0.0]
        )

    def test_strict_anchors_sit_exactly_on_the_boundary(self):
        setup = GaussianSetup()
        anchors = sample_anchors(setup, 100, 0.0, 4.0, seed=3)
        for x in anchors.points:
            assert x @ setup.theta_true == 0.0
            assert setup.true_posterior(x) == 0.5
        assert anchors.delta == 0.0
        # parameters stay inside the requested range, on the y = -x line
        assert np.all(np.abs(anchors.points[:, 1]) <= 4.0)
        np.testing.assert_array_equal(anchors.points[:, 2], -anchors.points[:, 1])

    def test_relaxed_anchor_posteriors_are_uniform(self):
        setup = GaussianSetup()
        delta = 0.1
        anchors = sample_anchors(setup, 10_000, delta, 4.0, seed=5)
        etas = np.array([setup.true_posterior(x) for x in anchors.points])
        assert etas.mean() == pytest.approx(0.5, abs=0.002)
        assert etas.min() >= 0.4 and etas.max() <= 0.6
        stat = kstest((etas - 0.5 + delta) / (2 * delta), "uniform").statistic
        assert stat < 0.0163  # 1% critical value at 1e4 samples

    def test_relaxed_anchor_determinism(self):
        a = sample_anchors(GaussianSetup(), 50, 0.05, 4.0, seed=9)
        b = sample_anchors(GaussianSetup(), 50, 0.05, 4.0, seed=9)
        np.testing.assert_array_equal(a.points, b.points)
        assert a.delta == b.delta == 0.05

    def test_validation(self):
        setup = GaussianSetup()
        with pytest.raises(ParameterError):
            sample_anchors(setup, 0, 0.0, 4.0, seed=0)
        with pytest.raises(ParameterError):
            sample_anchors(setup, 1, 0.6, 4.0, seed=0)
        with pytest.raises(ParameterError):
            sample_anchors(setup, 1, 0.0, -1.0, seed=0)

    def test_boundary_unsolvable_when_last_coefficient_zero(self):
        setup = GaussianSetup(np.array([2.0, 0.0]), np.array([0.0, 0.0]))
        with pytest.raises(ParameterError):
            boundary_point(setup, [1.0])
