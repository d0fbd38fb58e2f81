"""
Unit tests for quasi-Hankel matrices, quasi-Vandermonde matrices and the affine
structure map S(p).
"""

import numpy as np
import pytest
from scipy.linalg import hankel

from slrc.core.errors import CoverageError, DimensionMismatchError, InvalidInputError
from slrc.structure.indexsets import IndexSet, triangle_set
from slrc.structure.quasi_hankel import (
    CoefficientArray,
    adjoint,
    assemble,
    basis_matrix,
    build_structure,
    exp_array,
    is_A_independent,
    numerical_rank,
    project_onto_structure,
    quasi_hankel,
    quasi_vandermonde,
)


def _random_points(rng, r, m):
    return rng.standard_normal((r, m)) + 1j * rng.standard_normal((r, m))


def _hankel_structure(h):
    h = np.asarray(h, dtype=complex)
    base = triangle_set(1, h.shape[0] - 1)
    return build_structure(base, CoefficientArray(base, h))


class TestCoefficientArray:
    def test_lookup_outside_domain_raises(self):
        h = CoefficientArray(triangle_set(2, 1), [1, 2, 3])
        assert h[(0, 1)] == 3
        with pytest.raises(CoverageError):
            h[(2, 0)]
        with pytest.raises(DimensionMismatchError):
            h[(0,)]

    def test_values_are_copied_and_frozen(self):
        values = np.array([1.0, 2.0, 3.0])
        h = CoefficientArray(triangle_set(1, 2), values)
        values[0] = 10.0
        assert h[(0,)] == 1.0
        with pytest.raises(ValueError):
            h.values[0] = 5.0

    def test_length_mismatch(self):
        with pytest.raises(InvalidInputError):
            CoefficientArray(triangle_set(1, 2), [1, 2])


class TestQuasiHankel:
    def test_univariate_is_ordinary_hankel(self, rng):
        h = rng.standard_normal(9)
        H = quasi_hankel(triangle_set(1, 4), CoefficientArray(triangle_set(1, 8), h))
        np.testing.assert_array_equal(H, hankel(h[:5], h[4:]))

    def test_zero_array_gives_zero_matrix(self):
        H = quasi_hankel(triangle_set(2, 3), CoefficientArray.zeros(triangle_set(2, 6)))
        assert H.shape == (10, 10)
        assert not np.any(H)

    def test_insufficient_coverage(self):
        with pytest.raises(CoverageError):
            quasi_hankel(triangle_set(2, 2), CoefficientArray.zeros(triangle_set(2, 3)))

    def test_vandermonde_first_row_and_univariate(self, rng):
        points = _random_points(rng, 3, 2)
        V = quasi_vandermonde(triangle_set(2, 3), points)
        assert V.shape == (10, 3)
        np.testing.assert_array_equal(V[0], np.ones(3))
        np.testing.assert_allclose(V[7], points[:, 0] ** 2 * points[:, 1])

        z = np.array([0.5, -1.0, 2.0j])
        np.testing.assert_allclose(quasi_vandermonde(triangle_set(1, 4), z), np.vander(z, 5, increasing=True).T)

    @pytest.mark.parametrize("m, d, r", [(1, 3, 2), (2, 2, 4), (2, 4, 6), (1, 4, 5)])
    def test_vandermonde_factorization(self, rng, m, d, r):
        C = triangle_set(m, d)
        points = _random_points(rng, r, m) * 0.7
        coeffs = rng.standard_normal(r) + 1j * rng.standard_normal(r)
        H = quasi_hankel(C, exp_array(C, points, coeffs))
        V = quasi_vandermonde(C, points)
        assert np.linalg.norm(H - V @ np.diag(coeffs) @ V.T) <= 1e-10 * np.linalg.norm(H)

    def test_vandermonde_factorization_random_instances(self, rng):
        checked = 0
        for _ in range(200):
            m, d, r = int(rng.integers(1, 3)), int(rng.integers(1, 5)), int(rng.integers(1, 7))
            C = triangle_set(m, d)
            points = _random_points(rng, r, m) * 0.7
            coeffs = rng.uniform(0.5, 2.0, r) * np.exp(2j * np.pi * rng.uniform(size=r))
            H = quasi_hankel(C, exp_array(C, points, coeffs))
            V = quasi_vandermonde(C, points)
            assert np.linalg.norm(H - V @ np.diag(coeffs) @ V.T) <= 1e-10 * np.linalg.norm(H)
            rank = numerical_rank(H)
            if is_A_independent(C, points, tol=1e-3):
                assert rank == r
                checked += 1
            else:
                assert rank <= min(r, len(C))
        assert checked > 50

    def test_rank_equals_number_of_points(self):
        points = [(0.3, 0.1), (-0.2, 0.5), (0.6, -0.4)]
        C = triangle_set(2, 2)
        assert is_A_independent(C, points)
        assert numerical_rank(quasi_hankel(C, exp_array(C, points, [1.0, 2.0, -1.0]))) == 3

    def test_exp_array_geometric_and_zero(self):
        h = exp_array(triangle_set(1, 3), [0.5], [1.0])
        np.testing.assert_allclose(h.values, 0.5 ** np.arange(7))
        assert not np.any(exp_array(triangle_set(2, 1), np.ones((2, 2)), [0, 0]).values)

    def test_independence(self, rng):
        A = triangle_set(1, 3)
        assert is_A_independent(A, [0.1, 0.2, -0.3])
        assert not is_A_independent(A, [0.1, 0.1])
        assert is_A_independent(triangle_set(2, 1), _random_points(rng, 3, 2))
        assert not is_A_independent(triangle_set(2, 1), _random_points(rng, 4, 2))


class TestStructure:
    def test_smallest_hankel_case(self):
        structure = _hankel_structure([1.0, 0.3])
        np.testing.assert_array_equal(structure.s0, [[1.0, 0.3], [0.3, 0.0]])
        assert structure.N == 1
        np.testing.assert_array_equal(structure.basis_matrix(1), [[0, 0], [0, 1]])

    def test_hankel_constant_part(self, rng):
        h = rng.standard_normal(6)
        structure = _hankel_structure(h)
        expected = hankel(h, np.zeros(6))
        np.testing.assert_array_equal(structure.s0, expected)
        corner = np.zeros((6, 6))
        corner[-1, -1] = 1.0
        np.testing.assert_array_equal(structure.basis_matrix(structure.N), corner)

    def test_t23_layout(self, rng):
        A = triangle_set(2, 3)
        known = CoefficientArray(A, rng.standard_normal(10))
        structure = build_structure(A, known)
        assert (structure.n, structure.N) == (10, 18)
        assert structure.missing[0] == (4, 0)
        # rows 1 and 6 (0-based) carry (1,0) and (3,0)
        assert structure.missing_labels[1, 6] == 0
        S1 = structure.basis_matrix(1)
        np.testing.assert_array_equal(S1, S1.T)
        assert S1.sum() == 3
        p = rng.standard_normal(18)
        assert structure.matrix(p)[1, 6] == p[0]

    def test_orbits_partition_and_disjoint(self, rng):
        structure = build_structure(triangle_set(2, 2), CoefficientArray(triangle_set(2, 2), rng.standard_normal(6)))
        known_positions = np.count_nonzero(structure.missing_labels < 0)
        assert structure.orbit_sizes.sum() + known_positions == structure.n ** 2
        for k in range(1, structure.N + 1):
            for j in range(k + 1, structure.N + 1):
                assert np.sum(structure.basis_matrix(k) * structure.basis_matrix(j)) == 0

    def test_assemble_is_symmetric(self, rng):
        A = triangle_set(2, 3)
        structure = build_structure(A, CoefficientArray(A, rng.standard_normal(10) + 1j))
        p = rng.standard_normal(18) + 1j * rng.standard_normal(18)
        S = structure.matrix(p)
        np.testing.assert_array_equal(S, S.T)
        np.testing.assert_array_equal(structure.matrix(np.zeros(18)), structure.s0)

    def test_adjoint_identity(self, rng):
        A = triangle_set(2, 2)
        structure = build_structure(A, CoefficientArray(A, rng.standard_normal(6)))
        p = rng.standard_normal(structure.N) + 1j * rng.standard_normal(structure.N)
        X = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        lhs = np.sum((structure.matrix(p) - structure.s0) * X)
        rhs = np.sum(p * structure.adjoint(X))
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))

    def test_adjoint_examples(self):
        structure = _hankel_structure([1.0, 2.0, 3.0])
        np.testing.assert_array_equal(structure.adjoint(np.ones((3, 3))), [2, 1])
        np.testing.assert_array_equal(structure.adjoint(structure.s0), [0, 0])
        np.testing.assert_array_equal(structure.adjoint(structure.basis_matrix(1)), [2, 0])

    def test_project_onto_structure(self, rng):
        structure = _hankel_structure([1.0, 2.0, 3.0])
        p0 = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        np.testing.assert_allclose(structure.project(structure.matrix(p0)), p0)
        np.testing.assert_array_equal(structure.project(structure.basis_matrix(2)), [0, 1])
        X = rng.standard_normal((3, 3))
        X = X + X.T
        assert structure.project(X)[0] == pytest.approx(0.5 * (X[1, 2] + X[2, 1]))

    def test_completed_array_and_parameters(self, rng):
        A = triangle_set(2, 2)
        full = exp_array(A, _random_points(rng, 2, 2), [1.0, 2.0])
        structure = build_structure(A, full)
        p = structure.parameters_of(full)
        completed = structure.completed_array(p)
        np.testing.assert_allclose(completed.values, full.values)
        np.testing.assert_allclose(structure.matrix(p), quasi_hankel(A, full))

    def test_no_missing_entries(self):
        A = IndexSet(1, [(0,)])
        structure = build_structure(A, CoefficientArray(A, [2.0]))
        assert structure.N == 0
        np.testing.assert_array_equal(structure.matrix(np.zeros(0)), [[2.0]])

    def test_known_must_cover_base(self):
        with pytest.raises(CoverageError):
            build_structure(triangle_set(1, 3), CoefficientArray(triangle_set(1, 2), [1, 2, 3]))


def test_functional_wrappers_delegate(rng):
    structure = _hankel_structure([1.0, 2.0, 3.0])
    p = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    value = assemble(structure, p)
    np.testing.assert_array_equal(value.matrix, structure.matrix(p))
    np.testing.assert_array_equal(value.p, p)
    np.testing.assert_array_equal(basis_matrix(structure, 2), structure.basis_matrix(2))
    np.testing.assert_array_equal(adjoint(structure, np.ones((3, 3))), [2, 1])
    np.testing.assert_allclose(project_onto_structure(structure, value.matrix), p)
    with pytest.raises(InvalidInputError):
        basis_matrix(structure, 3)
