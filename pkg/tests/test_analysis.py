"""Rate fitting, gap weights, envelope certification, and product estimates.

Oracles: synthetic power laws with known exponents, closed-form branch values
of the gap weight, trigonometric norm identities for the product estimates,
and the t = 0 normalization of the kernel envelopes.
"""
from __future__ import annotations

import math

import numpy as np
import pytest

from bousslab import (BOUND_KINDS, DecaySeries, ModelParams,
                      NonlinearitySpec, PhysicalField, certify_bound,
                      decay_series, default_certify_grids, fit_rate,
                      gap_weight, gaussian_radial_data, initial_data_size,
                      linear_norm_radial, make_grid, product_estimate_check,
                      radial_decay_series, solve, xnorm_proxy)

from conftest import random_smooth_field

P = ModelParams(alpha=-1.0)


def series_from(fn, t_lo=1e2, t_hi=1e4, n=40, **kw):
    t = np.geomspace(t_lo, t_hi, n)
    defaults = dict(k=0, norm_kind="sobolev2", source="linear")
    defaults.update(kw)
    return DecaySeries(times=t, values=fn(t), **defaults)


class TestDecaySeries:
    def test_label_format(self):
        s = series_from(lambda t: 1.0 / t, k=2, norm_kind="l1", source="nonlinear")
        assert s.label == "nonlinear:k2:l1"

    def test_decreasing_times_rejected(self):
        with pytest.raises(ValueError):
            DecaySeries(times=np.array([1.0, 1.0]), values=np.array([1.0, 1.0]),
                        k=0, norm_kind="sobolev2", source="linear")

    def test_negative_values_rejected(self):
        with pytest.raises(ValueError):
            DecaySeries(times=np.array([1.0, 2.0]), values=np.array([1.0, -1.0]),
                        k=0, norm_kind="sobolev2", source="linear")


class TestFitRate:
    def test_pure_power_law_recovered_exactly(self):
        fit = fit_rate(series_from(lambda t: 3.7 * (1.0 + t) ** -0.75), (1e2, 1e4))
        assert abs(fit.slope + 0.75) <= 1e-12
        assert fit.stderr <= 1e-12
        assert fit.intercept == pytest.approx(math.log(3.7), abs=1e-10)

    def test_constant_series_has_zero_slope(self):
        fit = fit_rate(series_from(lambda t: np.full_like(t, 2.5)), (1e2, 1e4))
        assert abs(fit.slope) <= 1e-13

    def test_log_corrected_law_fits_between_exponents(self):
        # (1+t)^(-1/2) log(2+t) over [1e2, 1e4]: the effective exponent sits
        # well above -1/2 because the log still grows through the window
        fit = fit_rate(series_from(lambda t: (1 + t) ** -0.5 * np.log(2 + t)),
                       (1e2, 1e4))
        assert -0.40 < fit.slope < -0.30

    def test_nonpositive_values_raise(self):
        s = series_from(lambda t: np.where(t > 1e3, 0.0, 1.0))
        with pytest.raises(ValueError, match="cannot take log"):
            fit_rate(s, (1e2, 1e4))

    def test_too_few_window_points_raise(self):
        s = series_from(lambda t: 1.0 / t, n=10)
        with pytest.raises(ValueError, match="at least 6"):
            fit_rate(s, (1e2, 2e2))

    def test_empty_window_rejected(self):
        s = series_from(lambda t: 1.0 / t)
        with pytest.raises(ValueError, match="window"):
            fit_rate(s, (1e3, 1e3))

    def test_window_is_inclusive_and_counted(self):
        s = series_from(lambda t: 1.0 / t, n=12)
        fit = fit_rate(s, (s.times[0], s.times[-1]))
        assert fit.n_points == 12


class TestGapWeight:
    def test_branch_values(self):
        assert gap_weight(17.3, 1) == 1.0
        assert gap_weight(0.0, 2) == pytest.approx(math.log(2.0), rel=1e-14)
        assert gap_weight(3.0, 3) == pytest.approx(0.5, rel=1e-14)
        assert gap_weight(3.0, 5) == pytest.approx(0.5, rel=1e-14)

    def test_vector_input(self):
        t = np.array([0.0, 1.0, 3.0])
        out = gap_weight(t, 2)
        assert out.shape == t.shape
        assert out[0] == pytest.approx(math.log(2.0))

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            gap_weight(1.0, 0)
        with pytest.raises(ValueError):
            gap_weight(-1.0, 2)


@pytest.fixture(scope="module")
def small_run():
    g = make_grid(1, 30.0, 64)
    u0 = PhysicalField.from_function(g, lambda x: 0.01 * np.exp(-x**2 / 2))
    return solve(u0, PhysicalField.zero(g), T=2.0, dt=0.05,
                 spec=NonlinearitySpec(), params=P, out_every=5)


class TestSeriesExtraction:
    def test_one_series_per_derivative_order(self, small_run):
        out = decay_series(small_run, k_list=(0, 1), norm_kind="sobolev2")
        assert [s.k for s in out] == [0, 1]
        assert all(s.times.size == small_run.times.size for s in out)
        assert all(s.source == "nonlinear" for s in out)

    def test_empty_k_list_rejected(self, small_run):
        with pytest.raises(ValueError, match="k_list"):
            decay_series(small_run, k_list=())

    def test_l1_and_linf_limited_to_zeroth_order(self, small_run):
        out = decay_series(small_run, k_list=(0,), norm_kind="linf")
        assert out[0].norm_kind == "linf"
        with pytest.raises(ValueError, match="k = 0"):
            decay_series(small_run, k_list=(1,), norm_kind="l1")

    def test_radial_series_matches_pointwise_evaluation(self):
        data = gaussian_radial_data(n=1)
        times = np.geomspace(1.0, 100.0, 8)
        out = radial_decay_series(data, times, (0,), 1, P, which="linear")
        assert out[0].source == "linear"
        direct = [linear_norm_radial(data, float(t), 0, 1, P, which="linear")
                  for t in times]
        assert np.allclose(out[0].values, direct, rtol=1e-12)

    def test_radial_series_thread_pool_is_deterministic(self):
        data = gaussian_radial_data(n=1)
        times = np.geomspace(1.0, 100.0, 8)
        serial = radial_decay_series(data, times, (0, 1), 1, P, threads=1)
        parallel = radial_decay_series(data, times, (0, 1), 1, P, threads=4)
        for a, b in zip(serial, parallel):
            assert np.array_equal(a.values, b.values)

    def test_gap_series_uses_profile_gap_label(self):
        data = gaussian_radial_data(n=1)
        times = np.geomspace(1.0, 30.0, 8)
        out = radial_decay_series(data, times, (0,), 1, P, which="gap")
        assert out[0].source == "profile_gap"

    def test_short_sweep_rejected(self):
        data = gaussian_radial_data(n=1)
        with pytest.raises(ValueError, match=">= 8"):
            radial_decay_series(data, np.geomspace(1.0, 10.0, 5), (0,), 1, P)


class TestDataSizeAndAmplitude:
    def test_xnorm_weights_grow_with_time(self, rng):
        g = make_grid(1, 30.0, 64)
        u0 = PhysicalField.from_function(g, lambda x: 0.01 * np.exp(-x**2 / 2))
        run = solve(u0, PhysicalField.zero(g), T=2.0, dt=0.05,
                    spec=NonlinearitySpec(f_kind="none", g_kind="none"),
                    params=P, out_every=5)
        vals = xnorm_proxy(run, n=1)
        assert vals.shape == run.times.shape
        assert np.all(vals > 0.0)

    def test_initial_data_size_zero_data(self):
        g = make_grid(1, 30.0, 64)
        z = PhysicalField.zero(g)
        assert initial_data_size(z, z) == 0.0

    def test_initial_data_size_displacement_only(self):
        g = make_grid(1, 60.0, 256)
        u0 = PhysicalField.from_function(g, lambda x: np.exp(-x**2 / 2))
        z = PhysicalField.zero(g)
        total = initial_data_size(u0, z)
        # L1 + (H^0 + H^1 + H^2 radial parts) of a unit Gaussian
        l1 = math.sqrt(2.0 * math.pi)
        h0 = math.pi**0.25
        h1 = math.pi**0.25 / math.sqrt(2.0)
        h2 = math.pi**0.25 * math.sqrt(0.75)
        assert total == pytest.approx(l1 + h0 + h1 + h2, rel=1e-6)

    def test_initial_data_size_rejects_mean_carrying_velocity(self):
        g = make_grid(1, 30.0, 64)
        u1 = PhysicalField.from_function(g, lambda x: np.exp(-x**2 / 2))
        with pytest.raises(ValueError, match="zero mean"):
            initial_data_size(PhysicalField.zero(g), u1)


class TestCertifyBound:
    def test_time_zero_ratio_is_one_for_displacement_envelope(self):
        # at t = 0 the displacement-kernel envelope equals its weight exactly
        xi = np.logspace(-3, 2, 50)
        cert = certify_bound("cosine_envelope", xi, np.array([0.0]),
                             (0.0,), P)
        assert cert.passed
        assert cert.fitted_c == 0.0
        assert cert.sup_ratio == pytest.approx(1.0, rel=1e-12)

    def test_zero_rate_always_passes_with_unit_floor(self):
        xi, t = default_certify_grids(60, 60)
        for which in ("sine_envelope", "cosine_envelope"):
            cert = certify_bound(which, xi, t, (0.0,), P)
            assert cert.passed
            assert cert.sup_ratio >= 1.0 - 1e-12

    def test_default_grid_certification(self):
        xi, t = default_certify_grids(120, 120)
        cands = (1.0, 0.5, 0.25, 0.1)
        for which in BOUND_KINDS:
            cert = certify_bound(which, xi, t, cands, P)
            assert cert.passed, which
            assert cert.fitted_c >= 0.1
            assert cert.sup_ratio <= 1e3

    def test_sup_ratio_monotone_in_rate(self):
        xi, t = default_certify_grids(60, 60)
        sups = []
        for c in (0.0, 0.2, 0.5, 1.0):
            cert = certify_bound("sine_envelope", xi, t, (c,), P,
                                 cap=1e300)
            sups.append(cert.sup_ratio)
        assert all(a <= b * (1 + 1e-12) for a, b in zip(sups, sups[1:]))

    def test_all_candidates_failing_is_a_result_not_an_error(self):
        xi, t = default_certify_grids(40, 40)
        cert = certify_bound("sine_envelope", xi, t, (50.0,), P, cap=10.0)
        assert not cert.passed
        assert math.isnan(cert.fitted_c)

    def test_unknown_bound_kind_rejected(self):
        xi, t = default_certify_grids(10, 10)
        with pytest.raises(ValueError, match="bound kind"):
            certify_bound("nonsense", xi, t, (0.1,), P)

    def test_profile_bounds_restricted_to_low_frequency(self):
        xi = np.array([1.0, 2.0])  # all above r0
        with pytest.raises(ValueError, match="r0"):
            certify_bound("profile_remainder_sine", xi, np.array([0.0, 1.0]),
                          (0.1,), P, r0=0.5)


class TestProductEstimates:
    def test_cauchy_schwarz_equality_case_is_exact(self, rng):
        g = make_grid(1, 30.0, 256)
        v = random_smooth_field(g, rng)
        w = random_smooth_field(g, rng)
        checks = {c.instance: c for c in product_estimate_check(v, w, m=0)}
        assert checks["sq_l1"].constant == 1.0

    def test_trig_identity_case(self):
        # v = cos x: lhs = ||sin 2x||_L2, rhs = 2 ||cos||_inf ||sin x||_L2
        g = make_grid(1, 2.0 * math.pi, 128)
        v = PhysicalField.from_function(g, np.cos)
        w = PhysicalField.zero(g)
        checks = {c.instance: c for c in product_estimate_check(v, w, m=1)}
        sq = checks["sq_l2"]
        assert sq.lhs == pytest.approx(math.sqrt(math.pi), rel=1e-10)
        assert sq.rhs == pytest.approx(math.sqrt(math.pi), rel=1e-6)
        assert sq.constant <= 1.0 + 1e-6

    def test_difference_form_vanishes_for_equal_fields(self, rng):
        g = make_grid(1, 30.0, 128)
        v = random_smooth_field(g, rng)
        checks = {c.instance: c for c in product_estimate_check(v, v, m=1)}
        assert checks["diff_l1"].lhs == 0.0
        assert checks["diff_l2"].lhs == 0.0

    def test_constants_bounded_across_random_fields(self, rng):
        g = make_grid(1, 30.0, 128)
        ratios = {}
        for _ in range(30):
            v = random_smooth_field(g, rng)
            w = random_smooth_field(g, rng)
            for m in (0, 1):
                for c in product_estimate_check(v, w, m):
                    if c.rhs > 0.0:
                        ratios.setdefault((c.instance, m), []).append(c.constant)
        for key, vals in ratios.items():
            arr = np.array(vals)
            arr = arr[arr > 0.0]
            assert arr.max() / arr.min() <= 10.0, key

    def test_grid_mismatch_and_bad_order_rejected(self, rng):
        g = make_grid(1, 30.0, 64)
        v = random_smooth_field(g, rng)
        with pytest.raises(ValueError, match="grid"):
            product_estimate_check(v, random_smooth_field(make_grid(1, 30.0, 128), rng), 0)
        with pytest.raises(ValueError, match="order"):
            product_estimate_check(v, v, 2)


class TestDerivativeGainInvariant:
    def test_linear_radial_slopes_gain_half_per_order(self):
        data = gaussian_radial_data(n=1)
        times = np.geomspace(1e2, 1e4, 24)
        series = radial_decay_series(data, times, (0, 1, 2), 1, P,
                                     which="linear", threads=4)
        slopes = [fit_rate(s, (1e2, 1e4)).slope for s in series]
        assert slopes[1] - slopes[0] == pytest.approx(-0.5, abs=0.05)
        assert slopes[2] - slopes[1] == pytest.approx(-0.5, abs=0.05)
