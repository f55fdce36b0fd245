import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monocube import induction as ind
from monocube.cube import random_upset, threshold_set
from monocube.forms import SetFunction, restrict

unit = st.floats(0.0, 1.0, allow_nan=False)
value = st.floats(-1.0, 1.0, allow_nan=False)


def sorted_pair(u, v):
    return (u, v) if u <= v else (v, u)


class TestFivePoint:
    def test_degenerate_densities(self):
        with pytest.raises(ValueError, match="degenerate"):
            ind.five_point(ind.InductionParams(0.0, 0.0, 1.0, 2.0, 3.0))

    def test_both_sides_vanish(self):
        p = ind.InductionParams(0.4, 0.4, 0.9, 0.9, 0.9)
        lhs, rhs, holds = ind.five_point(p)
        assert lhs == 0.0 and rhs == 0.0 and holds

    def test_plug_in_example(self):
        p = ind.InductionParams(0.5, 1.0, 0.0, 1.0, 0.0, c=0.5)
        lhs, rhs, holds = ind.five_point(p)
        assert lhs == pytest.approx(0.125, abs=1e-15)
        assert rhs == pytest.approx(1.0 / 24.0, abs=1e-15)
        assert holds

    def test_seeded_sweep_no_violations(self):
        sweep = ind.five_point_sweep(100_000, c=0.5, seed=1)
        assert sweep.violations == 0
        assert sweep.witness is None

    @settings(deadline=None, max_examples=300)
    @given(u=unit, v=unit, alpha=value, beta=value, gamma=value)
    def test_holds_at_half(self, u, v, alpha, beta, gamma):
        a0, a1 = sorted_pair(u, v)
        if a0 == 0.0 and a1 == 0.0:
            return
        _, _, holds = ind.five_point(
            ind.InductionParams(a0, a1, alpha, beta, gamma, c=0.5)
        )
        assert holds


class TestGMatrix:
    def test_margin_at_corners(self):
        assert ind.g_psd_margin(1.0, 1.0) == pytest.approx(0.0, abs=1e-15)
        assert ind.g_psd_margin(0.0, 0.0) == pytest.approx(0.0, abs=1e-15)
        # a0 = 0: margin reduces to sqrt(1-a) (sqrt(1-a) - sqrt(1-a1) + 1) - 1
        a = 0.5
        expect = math.sqrt(0.5) * (math.sqrt(0.5) + 1.0) - 1.0
        assert ind.g_psd_margin(0.0, 1.0) == pytest.approx(expect, abs=1e-15)

    def test_order_validation(self):
        with pytest.raises(ValueError):
            ind.g_psd_margin(0.8, 0.2)

    def test_grid_sweep_nonnegative(self):
        min_margin, _ = ind.psd_margin_grid(201)
        assert min_margin >= -1e-15

    @settings(deadline=None, max_examples=200)
    @given(u=unit, v=unit)
    def test_psd_everywhere(self, u, v):
        a0, a1 = sorted_pair(u, v)
        G = ind.g_matrix(a0, a1)
        assert G.g11 >= 0.0 and G.g22 >= 0.0
        assert G.trace >= 0.0
        assert G.det >= -1e-15
        assert ind.g_psd_margin(a0, a1) >= -1e-12


class TestDiscriminant:
    def test_degenerate_zero(self):
        assert ind.discriminant(0.0, 0.0, c=0.5) == 0.0

    def test_negative_in_interior(self):
        delta = ind.discriminant(0.5, 0.5, c=0.5)
        reduced = float(ind.reduced_discriminant_form(0.5, 0.5))
        assert delta < 0.0 and reduced < 0.0
        # reduced factor y - 2 + 2 sqrt(1-y) at y = 0.5
        assert 0.5 - 2.0 + math.sqrt(2.0) == pytest.approx(-0.0858, abs=1e-4)

    def test_grid_sweep_nonpositive(self):
        max_delta, _ = ind.discriminant_grid(201, c=0.5)
        assert max_delta <= 1e-12

    def test_quadratic_nonnegative(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            u, v = rng.random(2)
            a0, a1 = sorted_pair(u, v)
            q = ind.quad_coeffs(a0, a1, c=0.5)
            assert q.coefA >= 0.0
            T = rng.uniform(-100, 100, size=1000)
            vals = q.coefA * T * T + q.coefB * T + q.coefC
            assert vals.min() >= -1e-9 * max(1.0, np.abs(vals).max())


class TestBestFeasibleC:
    def test_grid_resolution_guard(self):
        with pytest.raises(ValueError):
            ind.best_feasible_c(grid_resolution=50)

    def test_at_least_half(self):
        best = ind.best_feasible_c(grid_resolution=101, draws=20_000, seed=3)
        assert 0.5 <= best <= 1.0

    def test_c_two_infeasible_with_witness(self):
        ok, witness = ind.feasible_c(2.0, grid_resolution=101, draws=10_000)
        assert not ok
        assert witness is not None and "kind" in witness

    def test_feasibility_monotone_in_c(self):
        flags = [
            ind.feasible_c(c, grid_resolution=101, draws=10_000)[0]
            for c in (0.3, 0.5, 0.7, 0.9, 1.1, 2.0)
        ]
        # once infeasible, stays infeasible for larger c
        assert flags == sorted(flags, reverse=True)


class TestSqrtIdentities:
    def test_equal_densities(self):
        res1, res2 = ind.sqrt_identities(0.4, 0.4)
        assert res1 == 0.0 and res2 < 1e-14

    def test_extreme_case(self):
        res1, res2 = ind.sqrt_identities(0.0, 1.0)
        assert res1 < 1e-14 and res2 < 1e-14

    def test_both_ones_limit(self):
        res1, res2 = ind.sqrt_identities(1.0, 1.0)
        assert res1 == 0.0 and res2 < 1e-14

    @settings(deadline=None, max_examples=300)
    @given(u=unit, v=unit)
    def test_random_sweep(self, u, v):
        a0, a1 = sorted_pair(u, v)
        res1, res2 = ind.sqrt_identities(a0, a1)
        assert res1 < 1e-14
        assert res2 < 1e-14


class TestJensenReduction:
    def test_piecewise_constant_is_fixed_point(self):
        A = threshold_set(3, 2)
        pair_members = restrict(SetFunction.constant(A, 0.0))[2]
        # build f piecewise constant: gamma on the A0 slice, alpha/beta on A1
        half = 1 << (A.n - 1)
        vals = []
        A0 = pair_members.A0
        for x in A.members:
            if x < half:
                vals.append(2.0)  # gamma
            elif (x - half) in A0:
                vals.append(1.0)  # alpha on A0
            else:
                vals.append(-1.0)  # beta off A0
        rep = ind.jensen_reduction_check(SetFunction(A, np.array(vals)))
        assert rep.lhs_averaged == pytest.approx(rep.lhs_full, abs=1e-14)

    def test_never_increases_lhs(self):
        for seed in range(100):
            rng = np.random.default_rng(seed)
            f = SetFunction.random(threshold_set(4, 2), rng)
            rep = ind.jensen_reduction_check(f)
            assert rep.lhs_averaged <= rep.lhs_full + 1e-12

    def test_rhs_matches_closed_form_variance(self):
        rng = np.random.default_rng(12)
        f = SetFunction.random(threshold_set(4, 2), rng)
        rep = ind.jensen_reduction_check(f)
        assert rep.var_f1_closed_form_residual < 1e-14

    def test_empty_low_slice_rejected(self):
        from monocube.cube import make_upset

        A = make_upset(3, [0b111])
        with pytest.raises(ValueError, match="vacuous"):
            ind.jensen_reduction_check(SetFunction(A, np.array([1.0])))


class TestTParameter:
    def test_degenerate_alpha_equals_gamma(self):
        p = ind.InductionParams(0.2, 0.6, 1.0, 0.3, 1.0)
        assert ind.t_parameter(p) is None

    def test_value(self):
        p = ind.InductionParams(0.2, 0.6, 1.0, 0.5, 0.0)
        assert ind.t_parameter(p) == pytest.approx(0.2, abs=1e-15)
