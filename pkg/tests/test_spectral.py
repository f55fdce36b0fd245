import numpy as np
import pytest

from monocube.cube import (
    dictator_set,
    enumerate_monotone,
    full_cube,
    make_upset,
    threshold_set,
)
from monocube.forms import SetFunction, dirichlet_form, poincare_ratio
from monocube.spectral import (
    induced_laplacian,
    lambda2,
    poincare_constant,
    second_eigenpair,
    verify_theorem,
)


class TestInducedLaplacian:
    def test_singleton(self):
        L = induced_laplacian(make_upset(3, [0b111]))
        assert L.matrix.shape == (1, 1)
        assert L.matrix.nnz == 0

    def test_square_is_four_cycle(self):
        L = induced_laplacian(full_cube(2))
        assert np.array_equal(L.degrees, [2, 2, 2, 2])
        assert np.allclose(np.asarray(L.matrix.sum(axis=1)).ravel(), 0.0)

    def test_majority_is_star(self):
        L = induced_laplacian(threshold_set(3, 2))
        dense = L.matrix.toarray()
        assert sorted(L.degrees) == [1, 1, 1, 3]
        center = int(np.argmax(L.degrees))
        assert threshold_set(3, 2).members[center] == 0b111
        assert np.array_equal(dense, dense.T)

    def test_symmetry_on_enumerated(self):
        for A in enumerate_monotone(3):
            M = induced_laplacian(A).matrix
            assert (M != M.T).nnz == 0


class TestLambda2:
    def test_full_cube(self):
        A = full_cube(3)
        L = induced_laplacian(A)
        assert lambda2(L) == pytest.approx(2.0, abs=1e-10)
        # full spectrum of Q_3 is {0, 2, 4, 6} with binomial multiplicities
        w = np.linalg.eigvalsh(L.matrix.toarray())
        assert np.allclose(np.sort(w), np.repeat([0, 2, 4, 6], [1, 3, 3, 1]))

    def test_star(self):
        L = induced_laplacian(threshold_set(3, 2))
        assert lambda2(L) == pytest.approx(1.0, abs=1e-10)
        w = np.linalg.eigvalsh(L.matrix.toarray())
        assert np.allclose(np.sort(w), [0.0, 1.0, 1.0, 4.0])

    def test_two_path(self):
        L = induced_laplacian(make_upset(2, [0b01]))
        assert lambda2(L) == pytest.approx(2.0, abs=1e-12)

    def test_singleton_rejected(self):
        with pytest.raises(ValueError, match="singleton"):
            lambda2(induced_laplacian(make_upset(2, [0b11])))

    def test_dense_iterative_agree(self):
        # half-cube of Q_9: 256 members, induced Q_8, lambda2 = 2
        A = dictator_set(9, 9)
        L = induced_laplacian(A)
        dense, _, _, _ = second_eigenpair(L, method="dense")
        it, _, res, _ = second_eigenpair(L, method="iterative")
        assert abs(dense - it) < 1e-8
        assert res < 1e-6

    def test_positive_gap_on_enumerated(self):
        # connectivity through the all-ones point forces lambda2 > 0
        for n in (2, 3, 4):
            for A in enumerate_monotone(n):
                if A.size < 2:
                    continue
                assert lambda2(induced_laplacian(A)) > 1e-10


class TestQuadraticFormOracle:
    def test_matches_dirichlet_form(self):
        rng = np.random.default_rng(0)
        for A in enumerate_monotone(3):
            L = induced_laplacian(A).matrix
            for _ in range(5):
                f = SetFunction.random(A, rng)
                quad = float(f.values @ (L @ f.values)) / (2.0 * A.size)
                assert quad == pytest.approx(
                    dirichlet_form(f), rel=1e-12, abs=1e-15
                )


class TestPoincareConstant:
    def test_full_cube_tight(self):
        res = poincare_constant(full_cube(3))
        assert res.cstar == pytest.approx(1.0, abs=1e-10)
        assert res.bound_fp == pytest.approx(1.0, abs=1e-12)

    def test_star(self):
        res = poincare_constant(threshold_set(3, 2))
        assert res.cstar == pytest.approx(2.0, abs=1e-10)
        assert res.bound_fp == pytest.approx(3.414213562373095, abs=1e-12)

    def test_half_cube_of_q4(self):
        res = poincare_constant(dictator_set(4, 4))
        assert res.cstar == pytest.approx(1.0, abs=1e-10)
        assert res.bound_fp == pytest.approx(3.414213562373095, abs=1e-12)

    def test_singleton_convention(self):
        res = poincare_constant(make_upset(3, [0b111]))
        assert res.cstar == 0.0
        assert res.method == "degenerate"


class TestVerifyTheorem:
    def test_all_n3_sets_pass(self):
        certs = [verify_theorem(A) for A in enumerate_monotone(3)]
        assert len(certs) == 19
        assert all(c.passes_fp and c.passes_ours for c in certs)
        assert all(c.slack_fp >= -1e-9 for c in certs)

    def test_witness_achieves_cstar(self):
        for A in (full_cube(4), threshold_set(4, 2)):
            cert = verify_theorem(A)
            assert cert.witness_ratio == pytest.approx(
                cert.result.cstar, abs=1e-9
            )

    def test_full_cube_witness_is_dictator_like(self):
        cert = verify_theorem(full_cube(3))
        assert cert.witness_ratio == pytest.approx(1.0, abs=1e-9)
        f = SetFunction(full_cube(3), cert.result.witness)
        assert poincare_ratio(f) == pytest.approx(1.0, abs=1e-9)
