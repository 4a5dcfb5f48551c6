"""Bound calculators against a vectorized linear-scan oracle and frozen
high-precision values."""

import math

import numpy as np
import pytest

from rsproj.bounds import (
    achievable_epsilon,
    dot_product_band,
    required_k_basic,
    required_k_serfling,
)

GRID_C = (1, 2, 5, 10)
GRID_EPS = (0.1, 0.25, 0.5, 1.0)
GRID_DELTA = (0.01, 0.1, 1.0)
GRID_N = (1, 10, 100)
GRID_D = (100, 10_000)


def threshold(c, eps, delta, n):
    return c * c * math.log(n * n / delta) / (2 * eps * eps)


def scan_min_k_basic(B):
    ks = np.arange(1, max(2, math.ceil(B) + 2))
    sat = ks >= B
    return int(ks[np.argmax(sat)]) if sat.any() else None


def scan_min_k_serfling(B, d):
    ks = np.arange(1, d + 1, dtype=np.float64)
    lhs = ks / (1.0 - (ks - 1.0) / d)
    sat = lhs >= B
    return int(np.argmax(sat)) + 1 if sat.any() else None


class TestWorkedValues:
    def test_basic_k98(self):
        res = required_k_basic(2, 0.5, 0.05, 100)
        assert res.k == 98
        assert res.feasible
        assert res.raw_bound == pytest.approx(97.64858116424139, rel=1e-12)

    def test_basic_quadruples_with_doubled_c(self):
        assert required_k_basic(4, 0.5, 0.05, 100).k == 391

    def test_basic_degenerate_clamps_to_one(self):
        res = required_k_basic(1, 0.5, 1.0, 1)
        assert res.k == 1
        assert res.raw_bound == 0.0

    def test_serfling_k90(self):
        res = required_k_serfling(2, 0.5, 0.05, 100, 1000)
        assert res.k == 90
        assert res.feasible

    def test_serfling_huge_d_recovers_basic(self):
        assert required_k_serfling(2, 0.5, 0.05, 100, 10**9).k == 98

    def test_basic_feasibility_flag(self):
        res = required_k_basic(2, 0.5, 0.05, 100, d=50)
        assert res.k == 98 and not res.feasible

    def test_serfling_infeasible_reports_d(self):
        # B = 69077.6 > d^2 = 10^4: even k=d fails
        res = required_k_serfling(10, 0.1, 0.01, 100, 100)
        assert not res.feasible
        assert res.k == 100


class TestGridMinimality:
    def test_exhaustive_grid(self):
        for c in GRID_C:
            for eps in GRID_EPS:
                for delta in GRID_DELTA:
                    for n in GRID_N:
                        B = threshold(c, eps, delta, n)
                        kb = required_k_basic(c, eps, delta, n)
                        assert kb.k == max(1, scan_min_k_basic(B))
                        for d in GRID_D:
                            ks = required_k_serfling(c, eps, delta, n, d)
                            oracle = scan_min_k_serfling(B, d)
                            if oracle is None:
                                assert not ks.feasible and ks.k == d
                            else:
                                assert ks.feasible and ks.k == oracle
                            assert ks.k <= kb.k

    def test_monotone_in_epsilon_and_c(self):
        ks = [required_k_basic(2, e, 0.05, 100).k for e in (0.1, 0.2, 0.4, 0.8)]
        assert ks == sorted(ks, reverse=True)
        kc = [required_k_basic(c, 0.5, 0.05, 100).k for c in (1, 2, 4, 8)]
        assert kc == sorted(kc)

    def test_monotone_in_delta_and_n(self):
        kd = [required_k_basic(2, 0.5, d, 100).k for d in (0.01, 0.1, 1.0)]
        assert kd == sorted(kd, reverse=True)
        kn = [required_k_basic(2, 0.5, 0.05, n).k for n in (1, 10, 100, 1000)]
        assert kn == sorted(kn)


class TestAchievableEpsilon:
    def test_inverse_of_basic_k98(self):
        res = achievable_epsilon(2, 98, 0.05, 100)
        assert res.epsilon == pytest.approx(0.49910271826365243, rel=1e-12)
        assert res.epsilon <= 0.5
        assert res.guaranteed

    def test_inverse_of_serfling_k90(self):
        res = achievable_epsilon(2, 90, 0.05, 100, d=1000, variant="serfling")
        assert res.epsilon == pytest.approx(0.4970967305839867, rel=1e-12)
        assert res.epsilon <= 0.5

    def test_serfling_at_full_dimension_shrinks_by_sqrt_d(self):
        d = 64
        basic = achievable_epsilon(1, d, 0.5, 10, variant="basic").epsilon
        serf = achievable_epsilon(1, d, 0.5, 10, d=d, variant="serfling").epsilon
        assert serf == pytest.approx(basic / math.sqrt(d), rel=1e-12)

    def test_non_guarantee_flag(self):
        res = achievable_epsilon(10, 2, 0.01, 1000)
        assert res.epsilon > 1 and not res.guaranteed

    def test_round_trip_at_returned_k(self):
        for c in GRID_C:
            for eps in GRID_EPS:
                kb = required_k_basic(c, eps, 0.05, 100)
                assert achievable_epsilon(c, kb.k, 0.05, 100).epsilon <= eps + 1e-12
                ks = required_k_serfling(c, eps, 0.05, 100, 10_000)
                if ks.feasible:
                    got = achievable_epsilon(
                        c, ks.k, 0.05, 100, d=10_000, variant="serfling"
                    )
                    assert got.epsilon <= eps + 1e-12


class TestValidation:
    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(c=0.5, epsilon=0.5, delta=0.05, n_points=10),
            dict(c=2, epsilon=0.0, delta=0.05, n_points=10),
            dict(c=2, epsilon=1.5, delta=0.05, n_points=10),
            dict(c=2, epsilon=0.5, delta=0.0, n_points=10),
            dict(c=2, epsilon=0.5, delta=0.05, n_points=0),
        ],
    )
    def test_bad_parameters_raise(self, kwargs):
        with pytest.raises(ValueError):
            required_k_basic(**kwargs)

    def test_serfling_requires_d(self):
        with pytest.raises(TypeError):
            required_k_serfling(2, 0.5, 0.05, 100)
        with pytest.raises(ValueError):
            required_k_serfling(2, 0.5, 0.05, 100, 0)


class TestDotProductBand:
    def test_unit_norms(self):
        assert dot_product_band(1.0, 1.0, 0.5) == 0.5

    def test_zero_vector_collapses(self):
        assert dot_product_band(0.0, 3.0, 0.5) == 0.0

    def test_matches_norm_band_for_equal_unit_vectors(self):
        # x_i = x_j on the unit sphere: the half-width is just epsilon
        assert dot_product_band(1.0, 1.0, 0.25) == 0.25

    def test_negative_norm_rejected(self):
        with pytest.raises(ValueError):
            dot_product_band(-1.0, 1.0, 0.5)
