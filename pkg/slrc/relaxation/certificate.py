"""
Optimality and uniqueness certificates for nuclear-norm completions.

For S(p) = U Sigma V^H of rank r put B = U_r V_r^H, P = U_r U_r^H and Q = I - P.
p is optimal when some M with ||M||_2 <= 1 satisfies

    adjoint(B + Q M Q^T) = 0,

i.e. A(P) vec(M) = -adjoint(B) for the linear operator A(P): M -> adjoint(Q M Q^T).
If additionally A(P) has full row rank N and the minimum-norm M* has ||M*||_2 < 1,
the minimizer is unique.

Also hosts the projector helpers used for recovery near zero roots:
block projectors P0, projector distances and the small-radius projector limits.
"""

import logging
from dataclasses import dataclass, field
from math import comb
from typing import List, Optional, Tuple

import numpy as np
from scipy.linalg import block_diag, null_space

from slrc.core.config import CertificateConfig
from slrc.core.errors import HypothesisViolationError, InvalidInputError
from slrc.structure.indexsets import IndexSet
from slrc.structure.quasi_hankel import QuasiHankelStructure, as_points, numerical_rank, quasi_vandermonde

logger = logging.getLogger(__name__)


@dataclass
class Certificate:
    """Optimality report for S(p)."""

    B: np.ndarray
    P: np.ndarray
    Q: np.ndarray
    rank: int
    rank_AP: int
    sigma_min_AP: float
    M_star: np.ndarray
    spectral_norm_M: float
    residual: float
    first_order: bool
    unique: bool
    dual_norm: Optional[float] = None
    dual_residual: Optional[float] = None

    def to_row(self, instance_id: str = "") -> dict:
        """Flat record for CSV reports."""
        return {
            'instance': instance_id,
            'rank': self.rank,
            'rank_AP': self.rank_AP,
            'sigma_min_AP': self.sigma_min_AP,
            'norm_M': self.spectral_norm_M,
            'residual': self.residual,
            'first_order': self.first_order,
            'unique': self.unique,
            'dual_norm': self.dual_norm,
            'dual_residual': self.dual_residual,
        }


def orbit_positions(structure: QuasiHankelStructure) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Row and column indices of the orbit of each beta_k."""
    rows, cols = np.nonzero(structure.missing_labels >= 0)
    labels = structure.missing_labels[rows, cols]
    return [(rows[labels == k], cols[labels == k]) for k in range(structure.N)]


def apply_condition_operator(structure: QuasiHankelStructure, Q: np.ndarray, M: np.ndarray) -> np.ndarray:
    """A(P) vec(M) = adjoint(Q M Q^T), unconjugated transpose on the right."""
    return structure.adjoint(Q @ M @ Q.T)


def condition_operator(structure: QuasiHankelStructure, Q: np.ndarray) -> np.ndarray:
    """Dense N x n^2 matrix of A(P); row k is vec(Q^T S_k Q) in row-major order."""
    n = structure.n
    A = np.empty((structure.N, n * n), dtype=complex)
    for k, (rows, cols) in enumerate(orbit_positions(structure)):
        A[k] = (Q[rows, :].T @ Q[cols, :]).reshape(-1)
    return A


def condition_gram(structure: QuasiHankelStructure, Q: np.ndarray) -> np.ndarray:
    """A(P) A(P)^H without forming A(P): column l is adjoint(Q S_l Q^T)."""
    G = np.empty((structure.N, structure.N), dtype=complex)
    for l, (rows, cols) in enumerate(orbit_positions(structure)):
        G[:, l] = structure.adjoint(Q[:, rows] @ Q[:, cols].T)
    return 0.5 * (G + G.conj().T)


def condition_residual(structure: QuasiHankelStructure, B: np.ndarray, Q: np.ndarray, M: np.ndarray) -> float:
    """max_k |<S_k, B + Q M Q^T>| by direct summation over each orbit."""
    C = B + Q @ M @ Q.T
    worst = 0.0
    for rows, cols in orbit_positions(structure):
        total = 0j
        for i, j in zip(rows, cols):
            total += C[i, j]
        worst = max(worst, abs(total))
    return worst


def _factors(S: np.ndarray, rank_tol: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    n = S.shape[0]
    U, s, Vh = np.linalg.svd(S)
    r = 0 if s.size == 0 or s[0] == 0 else int(np.sum(s > rank_tol * s[0]))
    B = U[:, :r] @ Vh[:r]
    P = U[:, :r] @ U[:, :r].conj().T
    return B, P, np.eye(n) - P, r


def _min_norm_multiplier(structure, Q, rhs, rank_tol, dense: bool):
    """Least-norm M with A(P) vec(M) = rhs, and the singular values of A(P)."""
    n = structure.n
    if dense:
        A = condition_operator(structure, Q)
        solution, *_ = np.linalg.lstsq(A, rhs, rcond=None)
        sigma = np.linalg.svd(A, compute_uv=False)
        return solution.reshape(n, n), sigma

    G = condition_gram(structure, Q)
    w, E = np.linalg.eigh(G)
    w = np.clip(w, 0.0, None)
    sigma = np.sqrt(w[::-1])
    cutoff = (rank_tol * sigma[0]) ** 2 if sigma.size and sigma[0] > 0 else 0.0
    inv = np.where(w > cutoff, 1.0 / np.where(w > cutoff, w, 1.0), 0.0)
    y = E @ (inv * (E.conj().T @ rhs))
    return Q @ structure.free_part(y) @ Q.T, sigma


def certificate(
    structure: QuasiHankelStructure,
    p,
    rank_tol: float = 1e-8,
    config: Optional[CertificateConfig] = None,
    dual: Optional[np.ndarray] = None,
) -> Certificate:
    """
    Evaluate the optimality conditions at S(p).

    Args:
        structure: The completion problem
        p: Candidate parameters
        rank_tol: Relative threshold for rank(S(p)) and rank(A(P))
        config: Certificate margins (defaults to CertificateConfig())
        dual: Optional subgradient candidate G of ||.||_* at S(p) (e.g. SolverResult.dual_matrix);
            M = Q (G - B) Q^T is then tried as a second multiplier for the first-order test

    Returns:
        Certificate with the minimum-norm multiplier M* and the verdicts
    """
    config = config or CertificateConfig()
    S = structure.matrix(p)
    B, P, Q, r = _factors(S, rank_tol)
    n, N = structure.n, structure.N

    if N == 0:
        return Certificate(
            B=B, P=P, Q=Q, rank=r, rank_AP=0, sigma_min_AP=float('inf'),
            M_star=np.zeros((n, n), dtype=complex), spectral_norm_M=0.0, residual=0.0,
            first_order=True, unique=True,
        )

    rhs = -structure.adjoint(B)
    dense = n <= config.dense_limit
    M_star, sigma = _min_norm_multiplier(structure, Q, rhs, rank_tol, dense)

    rank_AP = 0 if sigma[0] == 0 else int(np.sum(sigma > rank_tol * sigma[0]))
    sigma_min = float(sigma[N - 1]) if sigma.size >= N else 0.0
    residual = float(np.max(np.abs(apply_condition_operator(structure, Q, M_star) - rhs)))
    norm_M = float(np.linalg.norm(M_star, 2))

    first_order = residual <= config.residual_tol and norm_M <= 1 + config.first_order_slack
    unique = (
        first_order
        and norm_M < 1 - config.unique_slack
        and sigma_min > config.sigma_min_floor
        and rank_AP == N
    )

    dual_norm = dual_residual = None
    if dual is not None:
        M_dual = Q @ (np.asarray(dual) - B) @ Q.T
        dual_norm = float(np.linalg.norm(M_dual, 2))
        dual_residual = float(np.max(np.abs(apply_condition_operator(structure, Q, M_dual) - rhs)))
        if dual_residual <= config.dual_residual_tol and dual_norm <= 1 + config.first_order_slack:
            first_order = True

    return Certificate(
        B=B, P=P, Q=Q, rank=r, rank_AP=rank_AP, sigma_min_AP=sigma_min,
        M_star=M_star, spectral_norm_M=norm_M, residual=residual,
        first_order=first_order, unique=unique,
        dual_norm=dual_norm, dual_residual=dual_residual,
    )


def condition_rank(structure: QuasiHankelStructure, P: np.ndarray, tol: float = 1e-8) -> Tuple[int, float]:
    """rank and smallest singular value of A(P)."""
    if structure.N == 0:
        return 0, float('inf')
    Q = np.eye(structure.n) - P
    sigma = np.linalg.svd(condition_operator(structure, Q), compute_uv=False)
    rank = 0 if sigma[0] == 0 else int(np.sum(sigma > tol * sigma[0]))
    return rank, float(sigma[structure.N - 1])


def simple_projector(base: IndexSet, s: int) -> np.ndarray:
    """diag(I_s, 0) of size #A, for s <= binom(m + d', m)."""
    d = base.max_degree
    limit = comb(base.m + d // 2, base.m)
    if not 0 <= s <= limit:
        raise InvalidInputError(f"Block size must lie in 0..{limit}, got {s}")
    P0 = np.zeros((len(base), len(base)))
    P0[:s, :s] = np.eye(s)
    return P0


def _range_basis(P: np.ndarray) -> np.ndarray:
    w, E = np.linalg.eigh(0.5 * (P + P.conj().T))
    return E[:, w > 0.5]


@dataclass
class ProjectorDistance:
    distance: float
    identity_value: float
    """2 ||(I - P0) U||_F^2 for an orthonormal basis U of range(P); equals distance^2 when ranks agree"""


def projector_distance(P: np.ndarray, P0: np.ndarray) -> ProjectorDistance:
    """Frobenius distance between two orthogonal projectors."""
    P, P0 = np.asarray(P), np.asarray(P0)
    U = _range_basis(P)
    identity_value = 2.0 * float(np.linalg.norm((np.eye(P.shape[0]) - P0) @ U) ** 2)
    return ProjectorDistance(distance=float(np.linalg.norm(P - P0)), identity_value=identity_value)


def column_projector(V: np.ndarray, r: Optional[int] = None) -> np.ndarray:
    """Orthogonal projector onto the span of the leading r left singular vectors of V."""
    U, _, _ = np.linalg.svd(V, full_matrices=False)
    r = V.shape[1] if r is None else r
    return U[:, :r] @ U[:, :r].conj().T


@dataclass
class ProjectorLimitReport:
    """Small-radius limit of the column projector of V_A(rho y) and the distances to it."""

    limit: np.ndarray
    d0: int
    K: int
    L: int
    rows: List[Tuple[float, float]] = field(default_factory=list)


def projector_limit(base: IndexSet, points, tol: float = 1e-8) -> Tuple[np.ndarray, int, int, int]:
    """
    lim_{rho -> 0} of the projector onto the columns of V_A(rho y_1, ..., rho y_r).

    With d0 the smallest degree such that r <= binom(m + d0, m), K = binom(m + d0 - 1, m) and
    L = binom(m + d0, m) - K, the limit is diag(I_K, P2, 0) where P2 projects onto the
    degree-d0 rows of the Vandermonde columns that vanish on T(m, d0 - 1).

    Raises:
        HypothesisViolationError: if the points fail the required independence
    """
    V = quasi_vandermonde(base, points)
    M, r = V.shape
    m = base.m
    d0 = 0
    while comb(m + d0, m) < r:
        d0 += 1
    K = comb(m + d0 - 1, m) if d0 > 0 else 0
    L = comb(m + d0, m) - K
    if K + L > M:
        raise HypothesisViolationError(f"Index set too small for {r} points")

    if r == K + L:
        if numerical_rank(V[:r], tol) != r:
            raise HypothesisViolationError(f"Points are not T({m},{d0})-independent")
        limit = np.zeros((M, M))
        limit[:r, :r] = np.eye(r)
        return limit, d0, K, L

    V1 = V[:K]
    if numerical_rank(V1, tol) != K:
        raise HypothesisViolationError(f"Points are not T({m},{d0 - 1})-independent")
    W = V[K:K + L] @ null_space(V1, rcond=tol)
    if numerical_rank(W, tol) != r - K:
        raise HypothesisViolationError("Degree-d0 layer does not separate the points")
    P2 = column_projector(W, r - K)
    limit = block_diag(np.eye(K), P2, np.zeros((M - K - L, M - K - L)))
    return limit, d0, K, L


def projector_limit_check(base: IndexSet, points, rho_list, tol: float = 1e-8) -> ProjectorLimitReport:
    """Distances ||P(rho) - P_limit||_F along rho_list."""
    points = as_points(points, base.m)
    limit, d0, K, L = projector_limit(base, points, tol)
    r = points.shape[0]
    report = ProjectorLimitReport(limit=limit, d0=d0, K=K, L=L)
    for rho in rho_list:
        P = column_projector(quasi_vandermonde(base, rho * points), r)
        report.rows.append((float(rho), float(np.linalg.norm(P - limit))))
    return report


@dataclass
class PerturbationRadius:
    """
    delta0 = sigma_min(A(P0)), s_norm = ||[vec S_1 ... vec S_N]||_2 and radius = delta0 / s_norm.

    Projectors closer than `radius` to P0 (and within the region where sigma_min(A(P))
    stays above delta0) keep a multiplier of spectral norm below one.
    """

    delta0: float
    s_norm: float
    radius: float


def perturbation_radius(structure: QuasiHankelStructure, P0: np.ndarray) -> PerturbationRadius:
    _, delta0 = condition_rank(structure, P0)
    s_norm = float(np.sqrt(structure.orbit_sizes.max())) if structure.N else 0.0
    radius = delta0 / s_norm if s_norm else float('inf')
    return PerturbationRadius(delta0=delta0, s_norm=s_norm, radius=radius)
