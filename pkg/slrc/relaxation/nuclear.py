"""
Nuclear norm, its proximal operator, and the real 2n x 2n embedding of complex matrices.
"""

from typing import Tuple

import numpy as np

from slrc.core.errors import InvalidInputError
from slrc.structure.quasi_hankel import QuasiHankelStructure


def nuclear_norm(X) -> float:
    """Sum of singular values."""
    X = np.asarray(X)
    if X.size == 0:
        return 0.0
    return float(np.sum(np.linalg.svd(X, compute_uv=False)))


def soft_threshold_svd(X, tau: float) -> np.ndarray:
    """Proximal operator of tau * ||.||_*: U max(Sigma - tau, 0) V^H."""
    if tau < 0:
        raise InvalidInputError(f"Threshold must be non-negative, got {tau}")
    X = np.asarray(X)
    if X.size == 0:
        return X.copy()
    U, s, Vh = np.linalg.svd(X, full_matrices=False)
    shrunk = np.maximum(s - tau, 0.0)
    keep = shrunk > 0
    return (U[:, keep] * shrunk[keep]) @ Vh[keep]


def embed(X) -> np.ndarray:
    """[[Re X, -Im X], [Im X, Re X]]."""
    X = np.asarray(X, dtype=complex)
    return np.block([[X.real, -X.imag], [X.imag, X.real]])


def unembed(X_ext) -> np.ndarray:
    """Nearest complex matrix of a 2n x 2n real block matrix (averages the redundant blocks)."""
    X_ext = np.asarray(X_ext)
    n = X_ext.shape[0] // 2
    re = 0.5 * (X_ext[:n, :n] + X_ext[n:, n:])
    im = 0.5 * (X_ext[n:, :n] - X_ext[:n, n:])
    return re + 1j * im


def real_extension(p_R, p_I, structure: QuasiHankelStructure) -> np.ndarray:
    """
    The real block matrix [[S(p_R), -S(p_I)], [S(p_I), S(p_R)]].

    S_0 is split the same way, so this equals embed(S(p_R + i p_I)).
    """
    p = np.asarray(p_R, dtype=float) + 1j * np.asarray(p_I, dtype=float)
    return embed(structure.matrix(p))


def svd_via_real_extension(X, tol: float = 1e-12) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Complex SVD reassembled from the SVD of embed(X).

    Singular values of the embedding come in pairs and each pair spans a subspace closed
    under multiplication by i; a complex Gram-Schmidt pass over the real singular vectors
    (read as a + ib) keeps one complex vector per pair.

    Returns:
        U (n x n), s (n,), Vh (n x n) with X = U diag(s) Vh
    """
    X = np.asarray(X, dtype=complex)
    n = X.shape[0]
    if X.shape != (n, n):
        raise InvalidInputError(f"Expected a square matrix, got shape {X.shape}")
    U_ext, _, Vt_ext = np.linalg.svd(embed(X))

    def complex_basis(columns: np.ndarray) -> np.ndarray:
        picked = []
        for column in columns.T:
            v = column[:n] + 1j * column[n:]
            for w in picked:
                v = v - np.vdot(w, v) * w
            norm = np.linalg.norm(v)
            if norm > 1e-6:
                picked.append(v / norm)
            if len(picked) == n:
                break
        return np.stack(picked, axis=1)

    U = complex_basis(U_ext)
    s = np.linalg.norm(X.conj().T @ U, axis=0)
    scale = tol * max(s.max(initial=0.0), 1.0)
    V = np.zeros((n, n), dtype=complex)
    active = s > scale
    V[:, active] = (X.conj().T @ U[:, active]) / s[active]
    if not np.all(active):
        # complete the right factor on the kernel with the remaining extended vectors
        candidates = complex_basis(Vt_ext.T)
        fill = [V[:, j] for j in np.flatnonzero(active)]
        slots = list(np.flatnonzero(~active))
        for v in candidates.T:
            if not slots:
                break
            for w in fill:
                v = v - np.vdot(w, v) * w
            norm = np.linalg.norm(v)
            if norm > 1e-6:
                v = v / norm
                fill.append(v)
                V[:, slots.pop(0)] = v
        s = np.where(active, s, 0.0)
    order = np.argsort(-s, kind="stable")
    return U[:, order], s[order], V[:, order].conj().T
