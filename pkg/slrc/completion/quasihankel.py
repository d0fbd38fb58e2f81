"""
Exact minimal-rank quasi-Hankel completion.

Flat-extension rank tests, canonical completion of exponential arrays with their
uniqueness flags, and the generic rank bounds under which those results apply.
"""

import logging
from dataclasses import dataclass, field
from math import comb

import numpy as np

from slrc.core.errors import CoverageError, HypothesisViolationError, InvalidInputError
from slrc.structure.indexsets import IndexSet, doubled, extension, triangle_set
from slrc.structure.quasi_hankel import (
    CoefficientArray,
    as_points,
    exp_array,
    is_A_independent,
    numerical_rank,
    quasi_hankel,
)

logger = logging.getLogger(__name__)


@dataclass
class FlatExtensionResult:
    rank_B: int
    rank_Bplus: int

    @property
    def flat(self) -> bool:
        return self.rank_B == self.rank_Bplus

    def as_tuple(self):
        return self.rank_B, self.rank_Bplus, self.flat


def flat_extension_rank(base: IndexSet, h: CoefficientArray, tol: float = 1e-8) -> FlatExtensionResult:
    """
    Ranks of H_B(h) and H_{B+}(h) for B = T(m, floor(d/2) - 1), d the maximal degree in `base`.

    When the two ranks agree the minimal completion rank equals the common value.

    Raises:
        CoverageError: if h is not defined on 2(B+), or d < 2 leaves B empty
    """
    d = base.max_degree
    half = d // 2
    if half < 1:
        raise CoverageError(f"Flat-extension test needs degree >= 2, got {d}")
    inner = triangle_set(base.m, half - 1)
    outer = extension(inner)
    if not h.covers(doubled(outer)):
        raise CoverageError("Array does not cover 2(B+)")
    result = FlatExtensionResult(
        rank_B=numerical_rank(quasi_hankel(inner, h), tol),
        rank_Bplus=numerical_rank(quasi_hankel(outer, h), tol),
    )
    logger.debug(f"flat extension: rank_B={result.rank_B}, rank_B+={result.rank_Bplus}")
    return result


@dataclass
class CanonicalQHProblem:
    """
    Exponential-array completion problem on A = T(m, d).

    Attributes:
        m: Number of variables
        d: Degree of A
        points: r x m complex points z_k
        coeffs: r nonzero complex weights c_k
    """

    m: int
    d: int
    points: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        self.points = as_points(self.points, self.m)
        self.coeffs = np.asarray(self.coeffs, dtype=complex).reshape(-1)
        if self.points.shape[1] != self.m:
            raise InvalidInputError(f"Points must have {self.m} coordinates, got {self.points.shape[1]}")
        if self.points.shape[0] != self.coeffs.shape[0]:
            raise InvalidInputError(f"{self.points.shape[0]} points but {self.coeffs.shape[0]} coefficients")

    @property
    def r(self) -> int:
        return self.points.shape[0]

    @property
    def d_prime(self) -> int:
        return self.d // 2

    @property
    def A(self) -> IndexSet:
        return triangle_set(self.m, self.d)

    @property
    def B(self) -> IndexSet:
        return triangle_set(self.m, self.d_prime)

    @property
    def B_minus(self) -> IndexSet:
        return triangle_set(self.m, self.d_prime - 1)

    def full_array(self) -> CoefficientArray:
        return exp_array(self.A, self.points, self.coeffs)

    def known_array(self) -> CoefficientArray:
        return self.full_array().restrict(self.A)


@dataclass
class QHCompletion:
    """Canonical completion over 2A, its rank and the uniqueness flag."""

    array: CoefficientArray
    rank: int
    unique: bool
    notes: list = field(default_factory=list)


def canonical_qh_completion(problem: CanonicalQHProblem, tol: float = 1e-8) -> QHCompletion:
    """
    Complete the array on 2A with the same exponential formula.

    Unique when d is odd, or when d is even and the points are T(m, d'-1)-independent.

    Raises:
        InvalidInputError: on a zero coefficient
        HypothesisViolationError: if the points are not B-independent
    """
    if np.any(problem.coeffs == 0):
        raise InvalidInputError("Canonical completion requires nonzero coefficients")
    if not is_A_independent(problem.B, problem.points, tol):
        raise HypothesisViolationError(f"Points are not T({problem.m},{problem.d_prime})-independent")

    array = problem.full_array()
    rank = numerical_rank(quasi_hankel(problem.A, array), tol)
    notes = []
    if problem.d % 2 == 1:
        unique = True
        notes.append("d odd")
    else:
        unique = problem.d_prime >= 1 and is_A_independent(problem.B_minus, problem.points, tol)
        notes.append("d even, T(m,d'-1)-independent" if unique else "d even, not T(m,d'-1)-independent")
    if rank != problem.r:
        logger.warning(f"Completed matrix has numerical rank {rank}, expected {problem.r}")
    return QHCompletion(array=array, rank=rank, unique=unique, notes=notes)


def generic_rank_bound(m: int, d: int, strict: bool = False) -> int:
    """Largest r covered by the B-independence (strict: T(m, d'-1)-independence) hypothesis."""
    half = d // 2
    return comb(half + m - 1, m) if strict else comb(half + m, m)
