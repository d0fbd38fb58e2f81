"""
Unit tests for exact Hankel completion: characteristic rank and vector, roots,
canonical representations, recursive completion and the nullspace basis.

Dependencies:
pip install pytest
"""

import numpy as np
import pytest
from pytest import mark, param
from scipy.linalg import hankel

from slrc.completion.hankel import (
    canonical_completion,
    canonical_representation,
    characteristic_info,
    characteristic_roots,
    characteristic_vector,
    complete_sequence,
    completed_matrix,
    fit_representation,
    hankel_rank,
    is_unique_completion,
    nullspace_projector_bound,
    nullspace_toeplitz,
)
from slrc.core.errors import DegenerateCaseError, InconsistentRankError, InvalidInputError
from slrc.structure.quasi_hankel import numerical_rank


def _geometric(lam, d):
    return lam ** np.arange(d + 1)


def _max_known_rank(h):
    """Largest rank of a Hankel matrix built from h_0..h_d alone."""
    d = len(h) - 1
    best = 0
    for rows in range(1, d + 2):
        cols = d + 2 - rows
        block = hankel(h[:rows], h[rows - 1:rows - 1 + cols])
        best = max(best, np.linalg.matrix_rank(block))
    return best


def test_hankel_rank_matches_submatrix_oracle(rng):
    """The characteristic rank equals the maximal rank of the known Hankel submatrices."""
    grid = np.array([0, 1, -1, 1j, 2])
    for _ in range(500):
        length = int(rng.integers(1, 8))
        h = grid[rng.integers(0, len(grid), size=length)].astype(complex)
        assert hankel_rank(h) == _max_known_rank(h), h


@mark.parametrize(
    "h, r",
    [
        param(_geometric(0.5, 5), 1, id="geometric"),
        param([1, 2, 3, 0, 0, 0, 0], 3, id="zero-padded"),
        param(2.0 ** np.arange(5) + 1, 2, id="two-roots"),
        param(np.zeros(4), 0, id="zero"),
        param([0, 1, 0], 2, id="rank-boundary"),
    ],
)
def test_hankel_rank_examples(h, r):
    assert hankel_rank(h) == r
    d = len(h) - 1
    assert 2 * r <= d + 2


def test_characteristic_vector_examples():
    lam = 0.3 - 0.4j
    q = characteristic_vector(_geometric(lam, 5), 1)
    np.testing.assert_allclose(q, np.array([-lam, 1]) / np.linalg.norm([-lam, 1]), atol=1e-12)

    q = characteristic_vector([1, 2, 3, 0, 0, 0, 0], 3)
    np.testing.assert_allclose(q, [0, 0, 0, 1], atol=1e-12)

    q = characteristic_vector(2.0 ** np.arange(5) + 1, 2)
    np.testing.assert_allclose(q, np.array([2, -3, 1]) / np.sqrt(14), atol=1e-12)


def test_characteristic_vector_rejects_wrong_rank():
    with pytest.raises(InconsistentRankError):
        characteristic_vector(2.0 ** np.arange(5) + 1, 1)
    with pytest.raises(InconsistentRankError):
        characteristic_vector([1.0, 0.0], 0)


def test_canonical_completion_examples():
    lam = 0.5
    h = _geometric(lam, 5)
    np.testing.assert_allclose(canonical_completion(h, characteristic_vector(h, 1)), lam ** np.arange(6, 11))

    h = [1, 2, 3, 0, 0, 0, 0]
    np.testing.assert_allclose(canonical_completion(h, characteristic_vector(h, 3)), np.zeros(6), atol=1e-14)

    h = 2.0 ** np.arange(5) + 1
    np.testing.assert_allclose(canonical_completion(h, characteristic_vector(h, 2)), [33, 65, 129, 257])


def test_canonical_completion_degenerate_case():
    h = [0.0, 0.0, 1.0]
    info_rank = hankel_rank(h)
    q = characteristic_vector(h, info_rank)
    with pytest.raises(DegenerateCaseError):
        canonical_completion(h, q)


def test_complete_sequence_zero():
    info, completion = complete_sequence(np.zeros(5))
    assert info.rank == 0
    assert info.roots == []
    np.testing.assert_array_equal(completion, np.zeros(4))


def test_characteristic_roots():
    roots = characteristic_roots([2, -3, 1])
    assert [nu for _, nu in roots] == [1, 1]
    np.testing.assert_allclose([lam for lam, _ in roots], [2, 1])

    roots = characteristic_roots([0.25, -1.0, 1.0])
    assert len(roots) == 1
    assert roots[0][1] == 2
    assert abs(roots[0][0] - 0.5) < 1e-6


class TestCanonicalRepresentation:
    def test_geometric(self):
        np.testing.assert_allclose(canonical_representation([0.7j], [1.0], 6), _geometric(0.7j, 6))

    def test_zero_root_gives_kronecker_terms(self):
        h = canonical_representation([(0.0, 3)], [[1.0, 2.0, 3.0]], 6)
        np.testing.assert_array_equal(h, [1, 2, 3, 0, 0, 0, 0])

    def test_damped_linear_family(self):
        rho, slope = 0.6, 1.7
        h = canonical_representation([(rho, 2)], [[1.0, slope]], 8)
        t = np.arange(9)
        np.testing.assert_allclose(h, (t * slope + 1) * rho ** t)
        assert hankel_rank(h) == 2

    def test_too_many_coefficients(self):
        with pytest.raises(InvalidInputError):
            canonical_representation([(0.5, 1)], [[1.0, 2.0]], 4)

    def test_round_trip(self):
        """Roots and coefficients survive representation -> characteristic info -> fit."""
        roots = [0.8j, 0.5, -0.3 + 0.2j]
        coeffs = [-1.0, 1.0, 2.0]
        h = canonical_representation(roots, coeffs, 7)
        info = characteristic_info(h)
        assert info.rank == 3
        found = sorted((lam for lam, _ in info.roots), key=lambda z: (z.real, z.imag))
        expected = sorted(roots, key=lambda z: (z.real, z.imag))
        np.testing.assert_allclose(found, expected, atol=1e-8)
        fitted = fit_representation(h, roots)
        np.testing.assert_allclose([c[0] for c in fitted], coeffs, atol=1e-8)


def test_completion_rank_and_recurrence_residual(rng):
    for _ in range(20):
        r = int(rng.integers(1, 4))
        d = 2 * r + int(rng.integers(0, 3))
        angles = 2 * np.pi * (np.arange(r) / r + 0.1 * rng.uniform(size=r))
        roots = rng.uniform(0.4, 0.9, size=r) * np.exp(1j * angles)
        coeffs = rng.uniform(0.5, 2.0, size=r) * rng.choice([-1.0, 1.0], size=r)
        h = canonical_representation(list(roots), list(coeffs), d)
        info, completion = complete_sequence(h)
        assert info.rank == r
        H = completed_matrix(h, completion)
        assert numerical_rank(H, 1e-8) == r

        full = np.concatenate([h, completion])
        residual = max(abs(np.dot(info.q, full[k:k + r + 1])) for k in range(2 * d - r + 1))
        assert residual <= 1e-10 * np.linalg.norm(full) * np.linalg.norm(info.q)


class TestNullspace:
    def test_stencil(self):
        lam = 0.4
        K = nullspace_toeplitz([-lam, 1.0], 3)
        np.testing.assert_allclose(K, [[-lam, 0], [1, -lam], [0, 1]])

    def test_annihilates_completion(self):
        h = canonical_representation([0.5, -0.2j], [1.0, 3.0], 6)
        info, completion = complete_sequence(h)
        K = nullspace_toeplitz(info.q, 7)
        assert K.shape == (7, 5)
        assert np.linalg.norm(completed_matrix(h, completion) @ K) <= 1e-10

    def test_full_rank_has_no_nullspace(self):
        assert nullspace_toeplitz([1.0, 2.0, 1.0], 2).shape == (2, 0)

    def test_projector_bound(self):
        for lam in (0.1, 0.3, 0.6):
            q = characteristic_vector(_geometric(lam, 5), 1)
            result = nullspace_projector_bound(q, 6)
            assert result.distance <= result.bound + 1e-12


@mark.parametrize(
    "h, expected",
    [
        param(_geometric(0.9, 4), True, id="geometric"),
        param([0.0, 1.0, 0.0], False, id="boundary"),
        param(np.zeros(3), True, id="zero"),
    ],
)
def test_is_unique_completion(h, expected):
    assert is_unique_completion(h) is expected
