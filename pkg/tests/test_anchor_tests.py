"""Anchor z-test machinery: variance identities, relaxed-anchor
correction, decision consistency, analytic power, and the random-anchor
expectation."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import logit

from labelnoise import (
    AnchorSet,
    DegenerateVarianceError,
    DimensionMismatchError,
    FittedModel,
    GaussianSetup,
    ParameterError,
    TestReport,
    anchor_mean_and_variance,
    anchor_variance_pairwise,
    expected_random_anchor_variance,
    fit,
    generate,
    power,
    power_curve,
    power_ratio,
    power_with_anchors,
    relaxed_variance,
    sample_anchors,
    z_test,
)

Z975 = 1.959963984540054


def make_model(theta, hessian_inv) -> FittedModel:
    return FittedModel(
        theta=np.asarray(theta, dtype=float),
        hessian_inv=np.asarray(hessian_inv, dtype=float),
        converged=True, iterations=1, grad_norm=0.0, ridge_used=0.0,
    )


def random_spd(rng, d: int) -> np.ndarray:
    A = rng.normal(size=(d, d))
    return A @ A.T + 0.1 * np.eye(d)


class TestAnchorSet:
    def test_requires_points(self):
        with pytest.raises(ParameterError):
            AnchorSet(np.empty((0, 3)))

    def test_delta_bounds(self):
        AnchorSet(np.ones((1, 3)), 0.5)
        with pytest.raises(ParameterError):
            AnchorSet(np.ones((1, 3)), 0.51)
        with pytest.raises(ParameterError):
            AnchorSet(np.ones((1, 3)), -0.01)


class TestVarianceForms:
    def test_single_anchor_reduces_to_quadratic_form(self):
        rng = np.random.default_rng(1)
        H = random_spd(rng, 3)
        model = make_model([0.0, 1.0, -1.0], H)
        x = np.array([1.0, 0.7, -0.7])
        _, v = anchor_mean_and_variance(model, AnchorSet(x[None, :]))
        assert v == pytest.approx(float(x @ H @ x) / 16.0, rel=1e-14)

    def test_duplicated_anchor_adds_no_information(self):
        rng = np.random.default_rng(2)
        H = random_spd(rng, 3)
        model = make_model([0.0, 1.0, -1.0], H)
        x = np.array([1.0, 0.7, -0.7])
        _, v1 = anchor_mean_and_variance(model, AnchorSet(x[None, :]))
        _, v2 = anchor_mean_and_variance(model, AnchorSet(np.stack([x, x])))
        assert v2 == pytest.approx(v1, rel=1e-14)

    def test_pairwise_covariance_identity(self):
        # sum over pairwise covariances must equal the mean-point
        # quadratic form, to numerical identity
        rng = np.random.default_rng(3)
        for _ in range(50):
            d = int(rng.integers(2, 6))
            k = int(rng.integers(1, 17))
            H = random_spd(rng, d)
            model = make_model(rng.normal(size=d), H)
            anchors = AnchorSet(rng.normal(size=(k, d)))
            _, v_bar = anchor_mean_and_variance(model, anchors)
            v_pair = anchor_variance_pairwise(model, anchors)
            assert abs(v_bar - v_pair) <= 1e-12 * max(1.0, abs(v_bar))

    def test_dimension_mismatch(self):
        model = make_model([0.0, 1.0], np.eye(2))
        with pytest.raises(DimensionMismatchError):
            anchor_mean_and_variance(model, AnchorSet(np.ones((1, 3))))


class TestRelaxedVariance:
    def test_zero_delta_is_bitwise_strict(self):
        rng = np.random.default_rng(4)
        H = random_spd(rng, 3)
        model = make_model([0.0, 2.0, 2.0], H)
        anchors = AnchorSet(rng.normal(size=(5, 3)), 0.0)
        _, strict = anchor_mean_and_variance(model, anchors)
        assert relaxed_variance(model, anchors) == strict

    def test_hand_value(self):
        # quad form 0.4, delta 0.1, one anchor
        model = make_model([0.0, 1.0, 1.0], np.diag([0.4, 0.3, 0.2]))
        anchors = AnchorSet(np.array([[1.0, 0.0, 0.0]]), 0.1)
        expected = (1.0 / 16.0 - 0.01 / 6.0) * 0.4 + 0.01 / 3.0
        got = relaxed_variance(model, anchors)
        assert got == pytest.approx(expected, rel=1e-14)
        assert got == pytest.approx(0.0277, abs=5e-5)

    def test_relaxation_term_vanishes_with_many_anchors(self):
        model = make_model([0.0, 1.0, 1.0], np.diag([0.4, 0.3, 0.2]))
        x = np.array([1.0, 0.0, 0.0])
        base = (1.0 / 16.0 - 0.01 / 6.0) * 0.4
        for k in (1, 10, 1000):
            anchors = AnchorSet(np.tile(x, (k, 1)), 0.1)
            assert relaxed_variance(model, anchors) == \
                pytest.approx(base + 0.01 / (3.0 * k), rel=1e-12)

    def test_continuous_in_delta(self):
        model = make_model([0.0, 1.0, 1.0], np.diag([0.4, 0.3, 0.2]))
        x = np.array([[1.0, 0.5, -0.5]])
        deltas = np.linspace(0.0, 0.5, 51)
        vals = [relaxed_variance(model, AnchorSet(x, d)) for d in deltas]
        assert np.all(np.isfinite(vals))
        assert np.max(np.abs(np.diff(vals))) < 0.01


class TestZTest:
    def test_exact_null_center(self):
        model = make_model([0.0, 0.0, 0.0], np.eye(3) * 0.01)
        anchors = AnchorSet(np.array([[1.0, 2.0, -2.0]]))
        rep = z_test(model, anchors, 0.05)
        assert rep.z == 0.0
        assert rep.p_value == 1.0
        assert not rep.reject

    def test_boundary_case_p_equals_level(self):
        v = 0.01
        eta_bar = 0.5 + Z975 * math.sqrt(v)
        model = make_model([logit(eta_bar)], [[16.0 * v]])
        rep = z_test(model, AnchorSet(np.array([[1.0]])), 0.05)
        assert rep.p_value == pytest.approx(0.05, abs=1e-9)
        assert rep.variance == pytest.approx(v, rel=1e-12)

    def test_retain_region_brackets_half(self):
        model = make_model([0.3, 0.1], np.eye(2) * 0.05)
        rep = z_test(model, AnchorSet(np.array([[1.0, 0.2]])), 0.05)
        assert rep.retain_lower <= 0.5 <= rep.retain_upper

    @settings(max_examples=200)
    @given(
        eta_bar=st.floats(min_value=0.02, max_value=0.98),
        v=st.floats(min_value=1e-6, max_value=0.05),
        a=st.floats(min_value=0.001, max_value=0.5),
    )
    def test_decision_formulations_agree(self, eta_bar, v, a):
        # reject flag, p-value threshold, and retain-region membership
        # are three phrasings of one decision
        model = make_model([logit(eta_bar)], [[16.0 * v]])
        rep = z_test(model, AnchorSet(np.array([[1.0]])), a)
        outside = rep.eta_bar < rep.retain_lower or rep.eta_bar > rep.retain_upper
        assert rep.reject == (rep.p_value < a) == outside

    def test_uses_relaxed_variance_when_delta_declared(self):
        model = make_model([0.0, 1.0, 1.0], np.diag([0.4, 0.3, 0.2]))
        pts = np.array([[1.0, 0.0, 0.0]])
        strict_rep = z_test(model, AnchorSet(pts, 0.0), 0.05)
        relaxed_rep = z_test(model, AnchorSet(pts, 0.1), 0.05)
        assert relaxed_rep.variance > strict_rep.variance
        assert relaxed_rep.variance == \
            pytest.approx(relaxed_variance(model, AnchorSet(pts, 0.1)), rel=1e-14)

    def test_degenerate_variance(self):
        model = make_model([0.5], [[0.0]])
        with pytest.raises(DegenerateVarianceError):
            z_test(model, AnchorSet(np.array([[1.0]])), 0.05)

    def test_bad_level(self):
        model = make_model([0.5], [[1.0]])
        for a in (0.0, 1.0, -0.1):
            with pytest.raises(ParameterError):
                z_test(model, AnchorSet(np.array([[1.0]])), a)

    def test_report_json_round_trip_is_byte_identical(self):
        model = make_model([0.31, 0.7, -0.2], np.eye(3) * 0.013)
        rep = z_test(model, AnchorSet(np.array([[1.0, 1.3, -0.4]])), 0.05)
        text = rep.to_json()
        again = TestReport.from_json(text).to_json()
        assert again == text


class TestPower:
    def test_equal_rates_give_level(self):
        for a in (0.01, 0.05, 0.10):
            assert power(0.1, 0.1, 0.1, 0.1, a) == pytest.approx(a, abs=1e-12)

    def test_monotone_in_gap_and_k(self):
        gaps = np.linspace(0.0, 0.9, 91)
        table = power_curve(gaps, (1, 2, 4, 8, 16, 32), v=0.1, v_tilde=0.1,
                            significance=0.05)
        assert np.all(np.diff(table, axis=0) >= 0.0)       # in the gap
        assert np.all(np.diff(table, axis=1) >= 0.0)       # in k
        assert table[0] == pytest.approx(0.05, abs=1e-10)  # gap 0 -> level
        assert table[-1, -1] > 0.999                       # k=32 saturates

    def test_rejects_bad_inputs(self):
        with pytest.raises(ParameterError):
            power(0.6, 0.5, 0.1, 0.1, 0.05)
        with pytest.raises(ParameterError):
            power(0.0, 0.2, 0.0, 0.1, 0.05)
        with pytest.raises(ParameterError):
            power(0.0, 0.2, 0.1, 0.1, 1.5)

    def test_power_with_anchors_equals_shift_scaling(self):
        # substituting v/k is the same as scaling the shift by sqrt(k)
        from scipy.special import ndtr, ndtri
        v, vt, a = 0.03, 0.025, 0.05
        zq = ndtri(1 - a / 2)
        for k in (1, 2, 8, 32):
            lhs = power_with_anchors(0.0, 0.3, v, vt, k, a)
            h = 0.15 * math.sqrt(k)
            bk = ndtr((zq * math.sqrt(v) + h) / math.sqrt(vt)) - \
                ndtr((-zq * math.sqrt(v) + h) / math.sqrt(vt))
            assert lhs == pytest.approx(1.0 - bk, rel=1e-9, abs=1e-12)


class TestPowerRatio:
    def test_one_anchor_is_exactly_one(self):
        assert power_ratio(0.2, 0.1, 0.1, 1, 0.05) == 1.0

    def test_ratio_never_exceeds_one(self):
        for h in np.arange(0.01, 0.46, 0.02):
            for k in (2, 4, 8, 16, 32):
                assert power_ratio(float(h), 0.1, 0.1, k, 0.05) <= 1.0

    def test_rejects_bad_k(self):
        with pytest.raises(ParameterError):
            power_ratio(0.1, 0.1, 0.1, 0, 0.05)


class TestEndToEndDetection:
    def test_ccn_is_rejected_on_most_seeded_runs(self):
        # N=2000, CCN(0, 0.2), 16 strict anchors: the corrupted fit is
        # flagged nearly always at level 0.05
        from labelnoise import NoiseSpec, corrupt_labels, generate
        setup = GaussianSetup()
        spec = NoiseSpec.class_conditional(0.0, 0.2)
        rejections = 0
        runs = 100
        for r in range(runs):
            clean = generate(setup, 2000, seed=40_000 + r)
            noisy = clean.with_labels(
                corrupt_labels(clean.labels, spec, seed=41_000 + r)
            )
            anchors = sample_anchors(setup, 16, 0.0, 4.0, seed=42_000 + r)
            rejections += z_test(fit(noisy), anchors, 0.05).reject
        assert rejections / runs >= 0.90


def draw_frame_anchors(rng, U, d, c, k, size):
    """Random boundary-frame anchors: per-axis half-width c means the
    frame coordinate spans [-c sqrt(d), c sqrt(d)] (diagonal convention)."""
    half = c * math.sqrt(d)
    r = rng.uniform(-half, half, size=(size, k, d))
    return r @ U.T


class TestExpectedRandomAnchorVariance:
    def test_formula_values(self):
        assert expected_random_anchor_variance(2, 1.0, 0.3, 1) == \
            pytest.approx(0.2, rel=1e-12)
        v1 = expected_random_anchor_variance(3, 2.0, 0.7, 1)
        v4 = expected_random_anchor_variance(3, 2.0, 0.7, 4)
        assert v4 == pytest.approx(v1 / 4.0, rel=1e-12)

    def test_validation(self):
        with pytest.raises(ParameterError):
            expected_random_anchor_variance(0, 1.0, 0.3, 1)
        with pytest.raises(ParameterError):
            expected_random_anchor_variance(2, -1.0, 0.3, 1)
        with pytest.raises(ParameterError):
            expected_random_anchor_variance(2, 1.0, 0.3, 0)

    def test_monte_carlo_frame_ensemble(self):
        # 1e5 draws of x = U r with per-axis half-width c: the mean of
        # x' H x must match d c^2 q / 3 closely
        rng = np.random.default_rng(12345)
        d, c = 3, 1.3
        U, _ = np.linalg.qr(rng.normal(size=(d, d)))
        H = random_spd(rng, d)
        q = float(np.trace(H))
        x = draw_frame_anchors(rng, U, d, c, 1, 100_000)[:, 0, :]
        mc = float(np.mean(np.einsum("ij,jk,ik->i", x, H, x)))
        assert mc == pytest.approx(expected_random_anchor_variance(d, c, q, 1),
                                   rel=0.02)

    def test_monte_carlo_one_dimensional_case(self):
        # at d = 1 the frame convention is literally U([-c, c])
        rng = np.random.default_rng(99)
        c, h = 2.0, 0.37
        r = rng.uniform(-c, c, size=100_000)
        mc = float(np.mean(h * r * r))
        assert mc == pytest.approx(expected_random_anchor_variance(1, c, h, 1),
                                   rel=0.02)

    def test_boundary_anchor_variance_scales_with_k_above_intercept_floor(self):
        # real-pipeline check: with anchors on the fitted-boundary line the
        # k-anchor variance follows floor + spread/k, where the floor is the
        # intercept-direction term that averaging anchors cannot remove
        setup = GaussianSetup()
        model = fit(generate(setup, 2000, seed=31337))
        H = model.hessian_inv
        floor = float(H[0, 0]) / 16.0
        u = np.array([0.0, 1.0, -1.0])
        spread = (16.0 / 3.0) * float(u @ H @ u) / 16.0
        for k, seed0 in ((1, 0), (8, 5000)):
            vs = []
            for rep in range(200):
                anchors = sample_anchors(setup, k, 0.0, 4.0, seed0 + rep)
                _, v = anchor_mean_and_variance(model, anchors)
                vs.append(v)
            assert float(np.mean(vs)) == pytest.approx(floor + spread / k,
                                                       rel=0.20)
