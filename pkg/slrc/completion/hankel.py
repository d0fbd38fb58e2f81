"""
Exact minimal-rank completion of univariate Hankel matrices.

A truncated sequence h_0..h_d is annihilated by a shortest linear recurrence
q_0 h_k + ... + q_r h_{k+r} = 0 (k = 0..d-r). Its order r is the minimal rank of
any completion of the (d+1) x (d+1) Hankel matrix, and continuing the recurrence
produces the canonical completion h_{d+1}..h_{2d}.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.linalg import hankel

from slrc.core.errors import DegenerateCaseError, InconsistentRankError, InvalidInputError

logger = logging.getLogger(__name__)

_NEGLIGIBLE = 1e-12

Root = Tuple[complex, int]


@dataclass
class CharacteristicInfo:
    """Characteristic rank r, unit-norm characteristic vector q_0..q_r, and optionally its roots."""

    rank: int
    q: np.ndarray
    roots: Optional[List[Root]] = None

    def to_dict(self) -> dict:
        return {
            'rank': self.rank,
            'q': [complex(x) for x in self.q],
            'roots': None if self.roots is None else [(complex(lam), nu) for lam, nu in self.roots],
        }


def _as_sequence(h) -> np.ndarray:
    h = np.asarray(h, dtype=complex).reshape(-1)
    if h.shape[0] == 0:
        raise InvalidInputError("A Hankel sequence needs at least one value")
    return h


def recurrence_system(h, r: int) -> np.ndarray:
    """The (d-r+1) x (r+1) matrix [h_{k+j}] whose kernel holds the order-r recurrences."""
    h = _as_sequence(h)
    d = h.shape[0] - 1
    rows = d - r + 1
    if rows <= 0:
        return np.zeros((0, r + 1), dtype=complex)
    return hankel(h[:rows], h[rows - 1:rows + r])


def hankel_rank(h, tol: float = 1e-9) -> int:
    """
    Characteristic rank: smallest r whose recurrence system has a nonzero kernel vector.

    Args:
        h: Values h_0..h_d
        tol: Relative threshold on the smallest singular value

    Returns:
        r, with 0 for the zero sequence and r <= (d+2)/2 otherwise
    """
    h = _as_sequence(h)
    if not np.any(h):
        return 0
    d = h.shape[0] - 1
    for r in range(1, d + 2):
        system = recurrence_system(h, r)
        if system.shape[0] < system.shape[1]:
            return r
        s = np.linalg.svd(system, compute_uv=False)
        logger.debug(f"rank scan r={r}: sigma_min/sigma_max = {s[-1] / s[0]:.3e}")
        if s[-1] <= tol * s[0]:
            return r
    return d + 1


def normalize_vector(q) -> np.ndarray:
    """Unit 2-norm with the last non-negligible coefficient real positive."""
    q = np.asarray(q, dtype=complex)
    q = q / np.linalg.norm(q)
    significant = np.flatnonzero(np.abs(q) > _NEGLIGIBLE)
    last = q[significant[-1]]
    return q * (np.conj(last) / abs(last))


def characteristic_vector(h, r: int, tol: float = 1e-9) -> np.ndarray:
    """
    Kernel vector of the order-r recurrence system, normalized.

    Raises:
        InconsistentRankError: if the system has no kernel at tolerance tol
    """
    h = _as_sequence(h)
    if r == 0:
        if np.any(h):
            raise InconsistentRankError("Only the zero sequence has characteristic rank 0")
        return np.ones(1, dtype=complex)
    system = recurrence_system(h, r)
    if system.shape[0] == 0:
        q = np.zeros(r + 1, dtype=complex)
        q[-1] = 1.0
        return q
    _, s, vh = np.linalg.svd(system, full_matrices=True)
    if system.shape[0] >= system.shape[1] and s[-1] > tol * s[0]:
        raise InconsistentRankError(f"Recurrence system of order {r} has trivial kernel (sigma_min={s[-1]:.3e})")
    return normalize_vector(vh[-1].conj())


def characteristic_roots(q, cluster_radius: float = 1e-6, tol: float = 1e-9) -> List[Root]:
    """
    Roots of q(z) = q_0 + q_1 z + ... + q_r z^r with multiplicities.

    Companion-matrix eigenvalues closer than `cluster_radius` are merged; a cluster is
    represented by its mean.
    """
    q = np.asarray(q, dtype=complex)
    r = q.shape[0] - 1
    if r == 0:
        return []
    if abs(q[-1]) <= tol * np.linalg.norm(q):
        raise DegenerateCaseError("Leading coefficient q_r vanishes; roots are undefined")
    raw = np.roots(q[::-1])

    clusters: List[List[complex]] = []
    for lam in raw:
        for cluster in clusters:
            if abs(lam - np.mean(cluster)) <= cluster_radius:
                cluster.append(lam)
                break
        else:
            clusters.append([lam])

    roots = [(complex(np.mean(c)), len(c)) for c in clusters]
    roots.sort(key=lambda item: (-abs(item[0]), item[0].real, item[0].imag))
    logger.debug(f"characteristic roots: {roots}")
    return roots


def canonical_completion(h, q, tol: float = 1e-9) -> np.ndarray:
    """
    Continue the recurrence: h_{k+r} = -(q_0 h_k + ... + q_{r-1} h_{k+r-1}) / q_r for k > d - r.

    Returns:
        The d values h_{d+1}..h_{2d}

    Raises:
        DegenerateCaseError: if |q_r| <= tol * ||q||
    """
    h = _as_sequence(h)
    q = np.asarray(q, dtype=complex)
    d = h.shape[0] - 1
    r = q.shape[0] - 1
    if r == 0:
        return np.zeros(d, dtype=complex)
    if abs(q[-1]) <= tol * np.linalg.norm(q):
        raise DegenerateCaseError("q_r vanishes: the singular-extension case is not supported")

    extended = np.concatenate([h, np.zeros(d, dtype=complex)])
    for t in range(d + 1, 2 * d + 1):
        extended[t] = -np.dot(q[:r], extended[t - r:t]) / q[-1]
    return extended[d + 1:]


def characteristic_info(h, tol: float = 1e-9, cluster_radius: float = 1e-6) -> CharacteristicInfo:
    """Rank, normalized vector and, when q_r does not vanish, the factored roots."""
    r = hankel_rank(h, tol)
    q = characteristic_vector(h, r, tol)
    roots = None
    if r == 0 or abs(q[-1]) > tol:
        roots = characteristic_roots(q, cluster_radius, tol)
    return CharacteristicInfo(rank=r, q=q, roots=roots)


def complete_sequence(h, tol: float = 1e-9) -> Tuple[CharacteristicInfo, np.ndarray]:
    """Characteristic info together with the canonical completion."""
    info = characteristic_info(h, tol)
    return info, canonical_completion(h, info.q, tol)


def _root_terms(roots: Sequence[Union[Root, complex]]) -> List[Root]:
    terms = []
    for root in roots:
        if isinstance(root, tuple):
            lam, nu = root
        else:
            lam, nu = root, 1
        if nu < 1:
            raise InvalidInputError(f"Root multiplicity must be >= 1, got {nu}")
        terms.append((complex(lam), int(nu)))
    return terms


def _basis_columns(lam: complex, nu: int, k: np.ndarray) -> np.ndarray:
    """Columns spanning the sequences attached to one root: k^l lam^k, or Kronecker deltas at lam = 0."""
    if lam == 0:
        return np.stack([(k == l).astype(complex) for l in range(nu)], axis=1)
    powers = lam ** k
    return np.stack([(k.astype(float) ** l) * powers for l in range(nu)], axis=1)


def canonical_representation(roots, coeffs, d: int) -> np.ndarray:
    """
    Evaluate h_k = sum_j c_j(k) lam_j^k for k = 0..d.

    Args:
        roots: (lam, nu) pairs, or bare lam for simple roots
        coeffs: one entry per root. For lam != 0, the coefficients of the polynomial
            c_j(k) in increasing degree (at most nu entries; a scalar for simple roots).
            For lam = 0, the Kronecker coefficients c_0..c_{nu-1} of h_k = c_k.
        d: Last index

    Returns:
        h_0..h_d
    """
    terms = _root_terms(roots)
    if len(coeffs) != len(terms):
        raise InvalidInputError(f"{len(terms)} roots but {len(coeffs)} coefficient entries")
    k = np.arange(d + 1)
    h = np.zeros(d + 1, dtype=complex)
    for (lam, nu), c in zip(terms, coeffs):
        c = np.atleast_1d(np.asarray(c, dtype=complex))
        if c.shape[0] > nu:
            raise InvalidInputError(f"Root {lam} of multiplicity {nu} takes at most {nu} coefficients")
        if lam == 0:
            h[:min(c.shape[0], d + 1)] += c[:d + 1]
        else:
            h += P.polyval(k, c) * lam ** k
    return h


def fit_representation(h, roots) -> List[np.ndarray]:
    """
    Least-squares coefficients of the canonical representation for given roots.

    Returns:
        One array per root, in the layout accepted by canonical_representation
    """
    h = _as_sequence(h)
    terms = _root_terms(roots)
    k = np.arange(h.shape[0])
    basis = np.concatenate([_basis_columns(lam, nu, k) for lam, nu in terms], axis=1)
    solution, *_ = np.linalg.lstsq(basis, h, rcond=None)
    out, start = [], 0
    for _, nu in terms:
        out.append(solution[start:start + nu])
        start += nu
    return out


def nullspace_toeplitz(q, n: int) -> np.ndarray:
    """
    Banded n x (n-r) matrix whose column j holds q_0..q_r in rows j..j+r (q scaled to q_r = 1).

    Its columns span the nullspace of the canonically completed n x n Hankel matrix.
    """
    q = np.asarray(q, dtype=complex)
    r = q.shape[0] - 1
    if abs(q[-1]) <= _NEGLIGIBLE * np.linalg.norm(q):
        raise DegenerateCaseError("nullspace basis needs q_r != 0")
    q = q / q[-1]
    cols = max(n - r, 0)
    K = np.zeros((n, cols), dtype=complex)
    for j in range(cols):
        K[j:j + r + 1, j] = q
    return K


@dataclass
class ProjectorBound:
    """Distance ||P - P0||_F of the completion's column projector to diag(I_r, 0), and its upper bound."""

    distance: float
    bound: float


def nullspace_projector_bound(q, n: int) -> ProjectorBound:
    """
    Compare ||P - P0||_F with sqrt(2 ||P0 K||_F^2 ||Sigma^{-1}||_F^2), where K = U Sigma V^H.

    P is the projector onto the column space of the completed Hankel matrix, i.e. the
    complement of range(K).
    """
    K = nullspace_toeplitz(q, n)
    r = n - K.shape[1]
    P0 = np.zeros((n, n))
    P0[:r, :r] = np.eye(r)
    if K.shape[1] == 0:
        return ProjectorBound(distance=float(np.linalg.norm(np.eye(n) - P0)), bound=0.0)
    U, s, _ = np.linalg.svd(K, full_matrices=False)
    projector = np.eye(n) - U @ U.conj().T
    distance = float(np.linalg.norm(projector - P0))
    bound = float(np.sqrt(2.0 * np.linalg.norm(P0 @ K) ** 2 * np.sum(s ** -2.0)))
    return ProjectorBound(distance=distance, bound=bound)


def completed_matrix(h, completion) -> np.ndarray:
    """The (d+1) x (d+1) Hankel matrix of h_0..h_{2d}."""
    h = _as_sequence(h)
    full = np.concatenate([h, np.asarray(completion, dtype=complex)])
    d = h.shape[0] - 1
    return hankel(full[:d + 1], full[d:])


def is_unique_completion(h, tol: float = 1e-9) -> bool:
    """The minimal-rank completion is unique when r < (d+2)/2."""
    h = _as_sequence(h)
    d = h.shape[0] - 1
    return 2 * hankel_rank(h, tol) < d + 2
