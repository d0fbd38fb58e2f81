"""
Nuclear-norm minimization over a quasi-Hankel affine structure.

Splitting scheme on  min ||X||_*  subject to  X = S(p):

    X   <- soft_threshold_svd(S(p) - U, 1/mu)
    p   <- project_onto_structure(X + U)          (S_0 reinserted by assembly)
    U   <- U + X - S(p)

with primal residual ||X - S(p)||_F and dual residual mu ||S(p) - S(p_prev)||_F.
The penalty mu may be rebalanced from the residual ratio during the first
iterations; the scaled dual U is rescaled accordingly.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from slrc.core.config import SolverConfig
from slrc.core.errors import ConvergenceError
from slrc.relaxation.nuclear import embed, nuclear_norm, soft_threshold_svd, unembed
from slrc.structure.quasi_hankel import QuasiHankelStructure

logger = logging.getLogger(__name__)


@dataclass
class SolverResult:
    """Outcome of minimize_nuclear_norm."""

    p_hat: np.ndarray
    singular_values: np.ndarray
    iterations: int
    primal_residual: float
    dual_residual: float
    nuclear_norm: float
    converged: bool
    rank: int
    mu: float
    dual_matrix: Optional[np.ndarray] = None
    """mu (V - X) from the last thresholding step: a subgradient of the nuclear norm at X"""
    history: List[Tuple[int, float, float, float]] = field(default_factory=list)

    def summary(self) -> str:
        status = "converged" if self.converged else "not converged"
        return (
            f"{status} after {self.iterations} iterations: ||S(p)||_* = {self.nuclear_norm:.6g}, "
            f"rank {self.rank}, primal {self.primal_residual:.2e}, dual {self.dual_residual:.2e}"
        )


class _ComplexPath:
    """Iterates on the complex n x n matrix directly."""

    def __init__(self, structure: QuasiHankelStructure):
        self.structure = structure

    def zeros_params(self) -> np.ndarray:
        return np.zeros(self.structure.N, dtype=complex)

    def zeros_matrix(self) -> np.ndarray:
        return np.zeros((self.structure.n, self.structure.n), dtype=complex)

    def matrix(self, params: np.ndarray) -> np.ndarray:
        return self.structure.matrix(params)

    def project(self, X: np.ndarray) -> np.ndarray:
        return self.structure.project(X)

    def to_complex(self, params: np.ndarray) -> np.ndarray:
        return params

    def complex_matrix(self, X: np.ndarray) -> np.ndarray:
        return X


class _RealExtensionPath:
    """
    Iterates on the real 2n x 2n embedding [[S(p_R), -S(p_I)], [S(p_I), S(p_R)]].

    Parameters are stacked as [p_R, p_I]; the projection averages each orbit over both
    copies of the real and imaginary blocks.
    """

    def __init__(self, structure: QuasiHankelStructure):
        self.structure = structure
        self.n = structure.n

    def zeros_params(self) -> np.ndarray:
        return np.zeros(2 * self.structure.N)

    def zeros_matrix(self) -> np.ndarray:
        return np.zeros((2 * self.n, 2 * self.n))

    def to_complex(self, params: np.ndarray) -> np.ndarray:
        N = self.structure.N
        return params[:N] + 1j * params[N:]

    def matrix(self, params: np.ndarray) -> np.ndarray:
        return embed(self.structure.matrix(self.to_complex(params)))

    def project(self, X: np.ndarray) -> np.ndarray:
        n = self.n
        sums = self.structure.adjoint
        re = (sums(X[:n, :n]).real + sums(X[n:, n:]).real) / (2 * self.structure.orbit_sizes)
        im = (sums(X[n:, :n]).real - sums(X[:n, n:]).real) / (2 * self.structure.orbit_sizes)
        return np.concatenate([re, im])

    def complex_matrix(self, X: np.ndarray) -> np.ndarray:
        return unembed(X)


def _rank(s: np.ndarray, tol: float) -> int:
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def minimize_nuclear_norm(structure: QuasiHankelStructure, config: Optional[SolverConfig] = None) -> SolverResult:
    """
    Approximately minimize ||S(p)||_* over p.

    Args:
        structure: Affine structure S(p) = S_0 + sum_k p_k S_k
        config: Solver parameters (defaults to SolverConfig())

    Returns:
        SolverResult for the final iterate

    Raises:
        ConvergenceError: if residuals are still above tolerance after max_iters;
            the error carries the residual history and the last iterate
    """
    config = config or SolverConfig()

    if structure.N == 0:
        s = np.linalg.svd(structure.s0, compute_uv=False) if structure.n else np.zeros(0)
        return SolverResult(
            p_hat=np.zeros(0, dtype=complex),
            singular_values=s,
            iterations=0,
            primal_residual=0.0,
            dual_residual=0.0,
            nuclear_norm=float(np.sum(s)),
            converged=True,
            rank=_rank(s, config.rank_tol),
            mu=config.mu,
        )

    path = _RealExtensionPath(structure) if config.use_real_extension else _ComplexPath(structure)
    mu = config.mu
    params = path.zeros_params()
    S = path.matrix(params)
    U = path.zeros_matrix()
    X = S.copy()
    V = S.copy()
    mu_x = mu
    history: List[Tuple[int, float, float, float]] = []
    primal = dual = np.inf
    converged = False

    iteration = 0
    for iteration in range(1, config.max_iters + 1):
        V = S - U
        mu_x = mu
        X = soft_threshold_svd(V, 1.0 / mu)
        params = path.project(X + U)
        S_prev = S
        S = path.matrix(params)
        U = U + X - S

        primal = float(np.linalg.norm(X - S))
        dual = float(mu * np.linalg.norm(S - S_prev))

        if iteration % config.record_every == 0 or iteration == 1:
            history.append((iteration, primal, dual, mu))
            logger.debug(f"iter {iteration}: primal={primal:.3e} dual={dual:.3e} mu={mu:.3g}")

        if primal <= config.primal_tol and dual <= config.dual_tol:
            converged = True
            break

        if config.adaptive_penalty and iteration < config.adapt_iters:
            if primal > config.residual_gap * dual:
                mu *= config.penalty_factor
                U = U / config.penalty_factor
            elif dual > config.residual_gap * primal:
                mu /= config.penalty_factor
                U = U * config.penalty_factor

    history.append((iteration, primal, dual, mu))
    p_hat = path.to_complex(params)
    S_final = structure.matrix(p_hat)
    s = np.linalg.svd(S_final, compute_uv=False)
    result = SolverResult(
        p_hat=p_hat,
        singular_values=s,
        iterations=iteration,
        primal_residual=primal,
        dual_residual=dual,
        nuclear_norm=nuclear_norm(S_final),
        converged=converged,
        rank=_rank(s, config.rank_tol),
        mu=mu,
        dual_matrix=path.complex_matrix(mu_x * (V - X)),
        history=history,
    )

    if not converged:
        raise ConvergenceError(
            f"No convergence within {config.max_iters} iterations (primal={primal:.3e}, dual={dual:.3e})",
            history=history,
            result=result,
        )
    logger.debug(result.summary())
    return result


def solve_or_last_iterate(structure: QuasiHankelStructure, config: Optional[SolverConfig] = None) -> SolverResult:
    """minimize_nuclear_norm, returning the last iterate (converged=False) instead of raising."""
    try:
        return minimize_nuclear_norm(structure, config)
    except ConvergenceError as e:
        logger.warning(f"{e}; keeping the last iterate")
        return e.result
