import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monocube.cube import (
    enumerate_monotone,
    full_cube,
    make_upset,
    random_upset,
    split,
    threshold_set,
)
from monocube.forms import (
    SetFunction,
    check_dirichlet_decomposition,
    check_variance_decomposition,
    dirichlet_form,
    parse_function_description,
    poincare_ratio,
    restrict,
    variance,
)
from monocube.spectral import theorem_bounds


def brute_dirichlet(f):
    """Independent oracle: literal double loop over members and coordinates."""
    A = f.set
    total = 0.0
    for pos, x in enumerate(A.members):
        for i in range(A.n):
            y = int(x) ^ (1 << i)
            if y in A:
                total += (f.values[pos] - f.values[A.rank[y]]) ** 2
    return total / (4.0 * A.size)


class TestDirichletForm:
    def test_constant_is_zero(self):
        for A in (full_cube(3), threshold_set(4, 2)):
            assert dirichlet_form(SetFunction.constant(A, 3.7)) == 0.0

    def test_dictator_on_square(self):
        f = SetFunction.dictator(full_cube(2), 1)
        assert dirichlet_form(f) == pytest.approx(0.25, abs=1e-15)

    def test_singleton_has_no_energy(self):
        A = make_upset(3, [0b111])
        assert dirichlet_form(SetFunction(A, np.array([5.0]))) == 0.0

    def test_matches_brute_force(self):
        rng = np.random.default_rng(3)
        for n in (2, 3, 4, 5):
            A = random_upset(n, 4, rng)
            f = SetFunction.random(A, rng)
            assert dirichlet_form(f) == pytest.approx(
                brute_dirichlet(f), rel=1e-13
            )


class TestVariance:
    def test_constant(self):
        assert variance(SetFunction.constant(full_cube(2), -2.0)) == 0.0

    def test_bernoulli(self):
        f = SetFunction.dictator(full_cube(2), 1)
        assert variance(f) == pytest.approx(0.25, abs=1e-15)

    def test_four_values(self):
        A = threshold_set(3, 2)
        f = SetFunction(A, np.array([0.0, 1.0, 2.0, 3.0]))
        assert variance(f) == pytest.approx(1.25, abs=1e-15)

    def test_nonnegative_random(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            A = random_upset(5, 3, rng)
            assert variance(SetFunction.random(A, rng)) >= 0.0


class TestRestrict:
    def test_constant(self):
        f = SetFunction.constant(threshold_set(3, 2), 2.5)
        f0, f1, _ = restrict(f)
        assert np.all(f0.values == 2.5) and np.all(f1.values == 2.5)
        assert f0.mean == f1.mean == 2.5

    def test_last_coordinate_dictator(self):
        f = SetFunction.dictator(full_cube(3), 3)
        f0, f1, _ = restrict(f)
        assert np.all(f0.values == 0.0) and np.all(f1.values == 1.0)

    def test_weight_on_majority(self):
        f = SetFunction.weight(threshold_set(3, 2))
        f0, f1, pair = restrict(f)
        assert pair.A1 == threshold_set(2, 1)
        assert pair.A0 == threshold_set(2, 2)
        w1 = SetFunction.weight(pair.A1).values
        assert np.array_equal(f1.values, w1 + 1.0)
        assert np.array_equal(f0.values, SetFunction.weight(pair.A0).values)

    def test_empty_low_slice(self):
        f = SetFunction(make_upset(2, [0b11]), np.array([1.0]))
        f0, f1, pair = restrict(f)
        assert f0 is None and pair.A0 is None
        assert np.array_equal(f1.values, [1.0])


class TestDirichletDecomposition:
    def test_constant(self):
        rep = check_dirichlet_decomposition(SetFunction.constant(full_cube(3), 1.0))
        assert rep.lhs == 0.0 and rep.residual == 0.0

    def test_random_function(self):
        f = SetFunction.random(threshold_set(4, 2), 11)
        rep = check_dirichlet_decomposition(f)
        assert rep.relative_residual < 1e-12

    def test_hand_computed_terms(self):
        # f = x_n on the full cube: all energy sits in the cross term.
        f = SetFunction.dictator(full_cube(3), 3)
        rep = check_dirichlet_decomposition(f)
        assert rep.lhs == pytest.approx(0.25, abs=1e-15)
        assert rep.rhs_terms["upper_slice"] == 0.0
        assert rep.rhs_terms["lower_slice"] == 0.0
        assert rep.rhs_terms["cross"] == pytest.approx(0.25, abs=1e-15)

    def test_empty_low_slice(self):
        f = SetFunction(make_upset(2, [0b11]), np.array([4.0]))
        rep = check_dirichlet_decomposition(f)
        assert rep.within_tol


class TestVarianceDecomposition:
    def test_constant(self):
        rep = check_variance_decomposition(SetFunction.constant(full_cube(3), 9.0))
        assert rep.lhs == 0.0 and rep.residual == 0.0

    def test_random_upset(self):
        f = SetFunction.random(random_upset(5, 4, 5), 5)
        rep = check_variance_decomposition(f)
        assert rep.relative_residual < 1e-12
        assert rep.extras["coefficient_residual"] < 1e-15

    def test_coefficient_identity_values(self):
        a0, a1 = 0.3, 0.7
        a = 0.5 * (a0 + a1)
        assert a1 * a0 / (a0 + a1) ** 2 == pytest.approx(0.21, abs=1e-15)
        assert (a1 * a0**2 + a0 * a1**2) / (8 * a**3) == pytest.approx(
            0.21, abs=1e-15
        )


@settings(deadline=None, max_examples=50)
@given(seed=st.integers(0, 10_000), n=st.integers(2, 7))
def test_both_decompositions_hold(seed, n):
    rng = np.random.default_rng(seed)
    A = random_upset(n, int(rng.integers(1, 7)), rng)
    f = SetFunction.random(A, rng)
    assert check_dirichlet_decomposition(f).relative_residual <= 1e-10
    assert check_variance_decomposition(f).relative_residual <= 1e-10


class TestPoincareRatio:
    def test_dictator_equality_case(self):
        f = SetFunction.dictator(full_cube(3), 1)
        assert poincare_ratio(f) == pytest.approx(1.0, abs=1e-12)

    def test_constant_undefined(self):
        assert poincare_ratio(SetFunction.constant(full_cube(2), 1.0)) is None

    def test_star_indicator(self):
        f = SetFunction.indicator(threshold_set(3, 2), 0b111)
        assert poincare_ratio(f) == pytest.approx(0.5, abs=1e-14)

    def test_bounded_by_theorem(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            n = int(rng.integers(2, 7))
            A = random_upset(n, int(rng.integers(1, 6)), rng)
            ratio = poincare_ratio(SetFunction.random(A, rng))
            if ratio is None:
                continue
            bound_fp, bound_ours = theorem_bounds(A.density)
            assert ratio <= bound_fp + 1e-9
            assert ratio <= bound_ours + 1e-9


class TestFunctionParsing:
    def test_all_kinds(self):
        A = threshold_set(3, 2)
        assert np.array_equal(
            parse_function_description("dictator 1", A).values,
            SetFunction.dictator(A, 1).values,
        )
        assert np.array_equal(
            parse_function_description("weight", A).values,
            SetFunction.weight(A).values,
        )
        assert parse_function_description("indicator 111", A).values.sum() == 1.0
        assert np.array_equal(
            parse_function_description("random 4", A).values,
            SetFunction.random(A, 4).values,
        )

    def test_malformed(self):
        A = threshold_set(3, 2)
        for text in ("", "dictator", "indicator 000", "sine 2"):
            with pytest.raises(ValueError):
                parse_function_description(text, A)
