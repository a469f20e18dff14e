"""Closed-form rates: hand values, an independent symbolic oracle, asymptotes."""

import math

import numpy as np
import pytest
import sympy

from mwrnoma import (
    AsrResult,
    FadingParams,
    ImpairmentProfile,
    NetworkConfig,
    OrderStatMoments,
    asr,
    asr_asymptotic,
    high_snr_offset,
    high_snr_slope,
    order_stat_moments,
    rate_pair_ideal,
    rate_pair_nonideal,
    rate_terms,
)

A3 = (0.5, 0.3, 0.2)
A4 = (0.5, 0.3, 0.15, 0.05)


@pytest.fixture(scope="module")
def setup3():
    fading = FadingParams(alpha=2, beta=3.0, nu=3.0, distances=(1.0,) * 3)
    moments = order_stat_moments(fading, 3)
    cfg = NetworkConfig(n_users=3, a=A3, r1=1000.0)
    return fading, moments, cfg


def cfg_at(cfg, r1):
    from dataclasses import replace

    return replace(cfg, r1=r1)


class TestPairRates:
    def test_zero_for_undecodable_pairs(self, setup3):
        _, moments, cfg = setup3
        imp = ImpairmentProfile.uniform(0.2)
        for k in range(1, 4):
            for n in range(k, 4):
                if n <= 2:
                    assert rate_pair_nonideal(moments, cfg, imp, k, n) == 0.0
                    assert rate_pair_ideal(moments, cfg, k, n) == 0.0

    def test_ideal_equals_nonideal_at_zero_distortion(self, setup3):
        _, moments, cfg = setup3
        imp = ImpairmentProfile.ideal()
        for k in range(2, 4):
            for n in range(1, k):
                assert rate_pair_nonideal(moments, cfg, imp, k, n) == pytest.approx(
                    rate_pair_ideal(moments, cfg, k, n), rel=1e-12
                )

    def test_two_user_hand_value(self):
        # psi/omega of two unit exponentials, a=(0.7, 0.3), r1=r2=10
        moments = OrderStatMoments(psi=np.array([0.5, 1.5]), omega=np.array([0.5, 3.5]))
        cfg = NetworkConfig(n_users=2, a=(0.7, 0.3), r1=10.0)
        num = 1.5 * 0.5 * 0.7 * 100.0
        varpi = 10.0 * (0.7 * 0.5 + 0.3 * 1.5)
        expected = 0.5 * math.log2(1.0 + num / (varpi + 1.5 * 10.0 + 1.0))
        assert rate_pair_ideal(moments, cfg, 2, 1) == pytest.approx(expected, rel=1e-12)

    def test_vanishing_snr(self, setup3):
        _, moments, cfg = setup3
        small = asr(moments, cfg_at(cfg, 1e-9), condition="ideal").total
        assert small == pytest.approx(0.0, abs=1e-6)

    def test_against_independent_symbolic_evaluation(self):
        """Exact-rational term-by-term re-evaluation of the non-ideal rate."""
        # exact first moments for alpha=2, beta=3, M=3, d=1, nu=3
        psi = [sympy.Rational(13, 9), sympy.Rational(197, 72), sympy.Rational(347, 72)]
        a = [sympy.Rational(1, 2), sympy.Rational(3, 10), sympy.Rational(1, 5)]
        kut2 = kur2 = krt2 = krr2 = sympy.Rational(1, 25)
        r1 = r2 = sympy.Integer(1000)
        M = 3

        def symbolic_rate(k, n):
            K, N = k - 1, n - 1
            den = sympy.Integer(0)
            for i in range(n, M - 1):  # residual interference i = n+1 .. M-1
                den += psi[K] * psi[i] * a[i] * r1 * r2
            for i in range(M):
                den += psi[K] * psi[i] * kut2 * a[i] * r1 * r2
                den += krr2 * psi[K] * psi[i] * a[i] * r1 * r2
                den += psi[K] * psi[i] * krt2 * r1 * r2 * (a[i] + a[i] * kut2)
                den += psi[K] * psi[i] * krt2 * krr2 * a[i] * r1 * r2
                den += psi[K] * psi[i] * kur2 * r1 * r2 * (a[i] + a[i] * kut2 + a[i] * krr2)
                den += psi[i] * r1 * (a[i] + a[i] * kut2)
                den += psi[i] * krr2 * a[i] * r1
            den += kur2 * psi[K] * r2 + psi[K] * r2 + psi[K] * krt2 * r2 + 1
            num = psi[K] * psi[N] * a[N] * r1 * r2
            return sympy.Rational(1, 2) * sympy.log(1 + num / den) / sympy.log(2)

        fading = FadingParams(alpha=2, beta=3.0, nu=3.0, distances=(1.0,) * 3)
        moments = order_stat_moments(fading, 3)
        cfg = NetworkConfig(n_users=3, a=A3, r1=1000.0)
        imp = ImpairmentProfile.uniform(0.2)
        for k in range(2, 4):
            for n in range(1, k):
                expected = float(symbolic_rate(k, n).evalf(30))
                got = rate_pair_nonideal(moments, cfg, imp, k, n)
                assert got == pytest.approx(expected, rel=1e-12)

    def test_mismatched_moments_rejected(self, setup3):
        _, moments, _ = setup3
        cfg4 = NetworkConfig(n_users=4, a=A4, r1=100.0)
        with pytest.raises(Exception):
            rate_pair_ideal(moments, cfg4, 2, 1)


class TestAsr:
    def test_two_users_single_pair(self):
        moments = OrderStatMoments(psi=np.array([1.0, 1.5]), omega=np.array([2.0, 3.5]))
        cfg = NetworkConfig(n_users=2, a=(0.7, 0.3), r1=10.0)
        result = asr(moments, cfg, condition="ideal")
        assert result.total == pytest.approx(rate_pair_ideal(moments, cfg, 2, 1))
        assert result.per_pair.shape == (2, 1)
        assert result.per_pair[0, 0] == 0.0

    def test_total_equals_pair_sum(self, setup3):
        _, moments, cfg = setup3
        result = asr(moments, cfg, ImpairmentProfile.uniform(0.1))
        assert result.total == pytest.approx(float(result.per_pair.sum()), abs=1e-12)

    def test_distortion_monotonicity(self, setup3):
        _, moments, cfg = setup3
        totals = [
            asr(moments, cfg, ImpairmentProfile.uniform(v)).total
            for v in np.arange(0.0, 0.31, 0.05)
        ]
        assert all(x > y for x, y in zip(totals, totals[1:]))

    def test_ideal_dominates_nonideal(self, setup3):
        _, moments, cfg = setup3
        ideal = asr(moments, cfg, condition="ideal").total
        assert asr(moments, cfg, ImpairmentProfile.ideal()).total == pytest.approx(ideal)
        assert asr(moments, cfg, ImpairmentProfile.uniform(0.05)).total < ideal

    def test_nondecreasing_in_snr_with_ceiling(self, setup3):
        _, moments, cfg = setup3
        imp = ImpairmentProfile.uniform(0.2)
        grid = [10.0 ** (db / 10.0) for db in range(0, 65, 5)]
        totals = [asr(moments, cfg_at(cfg, r), imp).total for r in grid]
        assert all(y >= x for x, y in zip(totals, totals[1:]))
        ceiling = asr_asymptotic(moments, cfg, imp).total
        assert all(t <= ceiling * (1 + 1e-9) for t in totals)

    def test_result_validation(self):
        with pytest.raises(Exception):
            AsrResult(per_pair=np.array([[1.0]]), total=2.0, provenance="analytical")
        with pytest.raises(Exception):
            AsrResult(per_pair=np.array([[1.0]]), total=1.0, provenance="guesswork")


class TestAsymptotics:
    def test_zero_distortion_limit_matches_ideal(self, setup3):
        _, moments, cfg = setup3
        ni = asr_asymptotic(moments, cfg, ImpairmentProfile.ideal(), "nonideal")
        ideal = asr_asymptotic(moments, cfg, condition="ideal")
        finite = np.isfinite(ideal.per_pair)
        assert np.allclose(ni.per_pair[finite], ideal.per_pair[finite], rtol=1e-12)
        assert np.array_equal(np.isfinite(ni.per_pair), finite)

    def test_empty_interference_pair_diverges(self, setup3):
        _, moments, cfg = setup3
        result = asr_asymptotic(moments, cfg, condition="ideal")
        assert math.isinf(result.per_pair[2, 1])  # k=3 decoding n=2: nothing left
        assert math.isinf(result.total)
        assert result.finite_total is not None and math.isfinite(result.finite_total)
        assert any("k=3, n=2" in note for note in result.notes)

    def test_nonideal_asymptote_is_finite_and_reached(self, setup3):
        _, moments, cfg = setup3
        imp = ImpairmentProfile.uniform(0.2)
        limit = asr_asymptotic(moments, cfg, imp)
        assert math.isfinite(limit.total)
        at60 = asr(moments, cfg_at(cfg, 1e6), imp).total
        assert at60 == pytest.approx(limit.total, rel=0.01)

    def test_pointwise_convergence(self, setup3):
        _, moments, cfg = setup3
        imp = ImpairmentProfile.uniform(0.15)
        limit = asr_asymptotic(moments, cfg, imp)
        curve = asr(moments, cfg_at(cfg, 1e7), imp)
        assert np.allclose(curve.per_pair, limit.per_pair, rtol=1e-3)


class TestSlopeOffset:
    def test_calibration_unit_slope(self):
        r = [10.0**4, 10.0**5, 10.0**6]
        y = [math.log2(v) for v in r]
        assert high_snr_slope(r, y) == pytest.approx(1.0, abs=1e-9)

    def test_calibration_offset_shift(self):
        r = [10.0**4, 10.0**5, 10.0**6]
        y = [math.log2(v) - 2.0 for v in r]
        slope = high_snr_slope(r, y)
        assert high_snr_offset(r, y, slope) == pytest.approx(2.0, abs=1e-9)

    def test_calibration_offset_quarter_snr(self):
        r = [10.0**4, 10.0**5, 10.0**6]
        y = [math.log2(v / 4.0) for v in r]
        slope = high_snr_slope(r, y)
        assert high_snr_offset(r, y, slope) == pytest.approx(2.0, abs=1e-9)

    def test_system_curves_have_zero_slope_divergent_offset(self, setup3):
        _, moments, cfg = setup3
        imp = ImpairmentProfile.uniform(0.2)
        r = [10.0 ** (db / 10.0) for db in (40, 50, 60)]
        y = [asr(moments, cfg_at(cfg, v), imp).total for v in r]
        slope = high_snr_slope(r, y)
        assert abs(slope) < 0.05
        assert math.isinf(high_snr_offset(r, y, slope))

    def test_preconditions(self):
        with pytest.raises(ValueError):
            high_snr_slope([1.0, 10.0], [1.0, 2.0])
        with pytest.raises(ValueError):
            high_snr_slope([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])  # 4.8 dB span
        with pytest.raises(ValueError):
            high_snr_slope([1.0, 100.0, 10.0], [1.0, 2.0, 3.0])
