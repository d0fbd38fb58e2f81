"""
Tests for the optimality certificate, the condition operator A(P) and the
projector helpers.

Dependencies:
pip install pytest
"""

import numpy as np
import pytest

from slrc.completion.hankel import canonical_representation
from slrc.core.config import CertificateConfig
from slrc.core.errors import HypothesisViolationError, InvalidInputError
from slrc.relaxation.certificate import (
    apply_condition_operator,
    certificate,
    condition_gram,
    condition_operator,
    condition_rank,
    condition_residual,
    perturbation_radius,
    projector_distance,
    projector_limit,
    projector_limit_check,
    simple_projector,
)
from slrc.structure.indexsets import IndexSet, triangle_set
from slrc.structure.quasi_hankel import CoefficientArray, build_structure


def _hankel_problem(known):
    known = np.asarray(known, dtype=complex)
    base = triangle_set(1, known.shape[0] - 1)
    return build_structure(base, CoefficientArray(base, known))


@pytest.fixture
def zero_padded():
    """h = (1, 2, 3, 0, 0, 0, 0): p = 0 is the minimizer."""
    return _hankel_problem([1, 2, 3, 0, 0, 0, 0])


@pytest.fixture
def geometric():
    lam = 0.5
    return _hankel_problem(lam ** np.arange(6)), lam ** np.arange(6, 11)


class TestCertificate:
    def test_zero_padded_sequence(self, zero_padded, cert_config):
        cert = certificate(zero_padded, np.zeros(zero_padded.N), config=cert_config)
        assert cert.rank == 3
        assert cert.rank_AP == zero_padded.N
        assert cert.spectral_norm_M < 1e-8
        assert cert.first_order
        assert cert.unique

    def test_geometric_completion(self, geometric, cert_config):
        structure, p = geometric
        cert = certificate(structure, p, config=cert_config)
        assert cert.rank == 1
        assert cert.residual <= cert_config.residual_tol
        assert cert.first_order
        assert cert.unique

    def test_perturbed_point_fails(self, geometric, cert_config):
        structure, p = geometric
        cert = certificate(structure, p + 1e-2, config=cert_config)
        assert not cert.first_order
        assert not cert.unique

    def test_factors(self, cert_config):
        lam = 0.4 + 0.3j
        structure = _hankel_problem(lam ** np.arange(5))
        cert = certificate(structure, lam ** np.arange(5, 9), config=cert_config)
        np.testing.assert_allclose(cert.P, cert.P.conj().T, atol=1e-12)
        np.testing.assert_allclose(cert.P @ cert.P, cert.P, atol=1e-12)
        np.testing.assert_allclose(cert.P + cert.Q, np.eye(structure.n), atol=1e-12)
        np.testing.assert_allclose(cert.B, cert.B.T, atol=1e-10)

    def test_residual_by_direct_summation(self, geometric, cert_config):
        structure, p = geometric
        cert = certificate(structure, p, config=cert_config)
        assert condition_residual(structure, cert.B, cert.Q, cert.M_star) == pytest.approx(cert.residual, abs=1e-12)

    def test_matrix_free_path_agrees(self, geometric):
        structure, p = geometric
        dense = certificate(structure, p, config=CertificateConfig())
        free = certificate(structure, p, config=CertificateConfig(dense_limit=1))
        np.testing.assert_allclose(free.M_star, dense.M_star, atol=1e-8)
        assert free.sigma_min_AP == pytest.approx(dense.sigma_min_AP, rel=1e-6)
        assert (free.first_order, free.unique) == (dense.first_order, dense.unique)

    def test_solver_dual_is_accepted(self, geometric, cert_config):
        structure, p = geometric
        reference = certificate(structure, p, config=cert_config)
        dual = reference.B + reference.Q @ reference.M_star @ reference.Q.T
        cert = certificate(structure, p, config=cert_config, dual=dual)
        assert cert.dual_residual <= cert_config.dual_residual_tol
        assert cert.dual_norm == pytest.approx(reference.spectral_norm_M, abs=1e-8)
        row = cert.to_row()
        assert row["first_order"]
        assert (row["dual_norm"], row["dual_residual"]) == (cert.dual_norm, cert.dual_residual)

    def test_no_unknowns(self):
        base = IndexSet(1, [(0,)])
        cert = certificate(build_structure(base, CoefficientArray(base, [1.0])), [])
        assert cert.first_order and cert.unique
        assert cert.rank == 1

    def test_row(self, geometric):
        structure, p = geometric
        row = certificate(structure, p).to_row("geo")
        assert row["instance"] == "geo"
        assert set(row) >= {"rank", "rank_AP", "norm_M", "first_order", "unique"}
        assert row["dual_norm"] is None and row["dual_residual"] is None


class TestConditionOperator:
    def test_dense_matches_matrix_free(self, rng):
        structure = _hankel_problem(rng.standard_normal(4))
        X = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        Q = np.eye(4) - np.outer(X[:, 0], X[:, 0].conj()) / np.vdot(X[:, 0], X[:, 0])
        M = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        A = condition_operator(structure, Q)
        np.testing.assert_allclose(A @ M.reshape(-1), apply_condition_operator(structure, Q, M), atol=1e-12)
        np.testing.assert_allclose(condition_gram(structure, Q), A @ A.conj().T, atol=1e-12)

    def test_condition_rank_of_simple_projector(self):
        structure = _hankel_problem(np.ones(6))
        P0 = simple_projector(structure.base, 3)
        rank, sigma_min = condition_rank(structure, P0)
        assert rank == structure.N
        assert sigma_min > 0

    def test_simple_projector(self):
        base = triangle_set(1, 5)
        P0 = simple_projector(base, 3)
        np.testing.assert_array_equal(P0[:3, :3], np.eye(3))
        assert P0.sum() == 3
        assert not np.any(simple_projector(base, 0))
        with pytest.raises(InvalidInputError):
            simple_projector(base, 4)

    def test_perturbation_radius(self):
        structure = _hankel_problem(np.ones(6))
        radius = perturbation_radius(structure, simple_projector(structure.base, 1))
        assert radius.s_norm == pytest.approx(np.sqrt(5))
        assert radius.radius == pytest.approx(radius.delta0 / np.sqrt(5))


class TestProjectors:
    def test_distance_to_itself(self):
        P = simple_projector(triangle_set(1, 4), 2)
        result = projector_distance(P, P)
        assert result.distance == 0.0
        assert result.identity_value == pytest.approx(0.0)

    def test_orthogonal_lines(self):
        result = projector_distance(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
        assert result.distance == pytest.approx(np.sqrt(2))
        assert result.identity_value == pytest.approx(result.distance ** 2)

    def test_identity_for_equal_ranks(self, rng):
        v = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        P = np.outer(v, v.conj()) / np.vdot(v, v).real
        P0 = simple_projector(triangle_set(1, 4), 1)
        result = projector_distance(P, P0)
        assert result.identity_value == pytest.approx(result.distance ** 2)

    def test_univariate_limit(self):
        report = projector_limit_check(triangle_set(1, 3), [0.5, -0.7], [0.1, 0.01, 0.001])
        expected = np.zeros((4, 4))
        expected[:2, :2] = np.eye(2)
        np.testing.assert_allclose(report.limit, expected)
        assert (report.d0, report.K, report.L) == (1, 1, 1)
        distances = [distance for _, distance in report.rows]
        assert distances[0] > distances[1] > distances[2]

    def test_bivariate_limit(self):
        report = projector_limit_check(triangle_set(2, 2), [(0.3, 0.8), (-0.6, 0.2)], [0.1, 0.01, 0.001])
        assert (report.d0, report.K, report.L) == (1, 1, 2)
        assert np.trace(report.limit).real == pytest.approx(2.0)
        distances = [distance for _, distance in report.rows]
        assert distances[0] > distances[1] > distances[2]
        assert distances[-1] < 1e-2

    def test_limit_needs_independent_points(self):
        with pytest.raises(HypothesisViolationError):
            projector_limit(triangle_set(1, 3), [0.5, 0.5])


def test_projector_limit_on_t23(rng):
    points = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    report = projector_limit_check(triangle_set(2, 3), points, [1e-1, 1e-2, 1e-3, 1e-4])
    distances = [distance for _, distance in report.rows]
    assert all(a > b for a, b in zip(distances, distances[1:]))
    assert distances[-1] < 1e-3


def test_residual_agrees_with_direct_summation(rng):
    """Operator-form residual against orbit sums on low-rank and generic points."""
    for trial in range(100):
        d = int(rng.integers(1, 6))
        r = int(rng.integers(1, d + 1))
        roots = 0.9 * rng.uniform(0.2, 1.0, size=r) * np.exp(2j * np.pi * rng.uniform(size=r))
        full = canonical_representation(list(roots), list(rng.standard_normal(r) + 1.5), 2 * d)
        structure = _hankel_problem(full[:d + 1])
        p = full[d + 1:] if trial % 2 == 0 else rng.standard_normal(structure.N)
        cert = certificate(structure, p)
        direct = condition_residual(structure, cert.B, cert.Q, cert.M_star)
        assert abs(direct - cert.residual) <= 1e-12


def test_projector_distance_identity(rng):
    for _ in range(100):
        n = int(rng.integers(2, 7))
        k = int(rng.integers(1, n))
        basis, _ = np.linalg.qr(rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k)))
        P = basis @ basis.conj().T
        P0 = np.zeros((n, n))
        P0[:k, :k] = np.eye(k)
        result = projector_distance(P, P0)
        assert abs(result.identity_value - result.distance ** 2) <= 1e-12
