"""
Arrays with an infinite family of minimal decompositions.

Sym(v_1 (x) ... (x) v_d) has rank 2^(d-1) and, for any weights gamma with
prod(gamma) = 1, the decomposition

    T = 1 / (2^(d-1) d!) * sum_eps (-1)^(eps_2 + ... + eps_d) b_eps^(x)d,
    b_eps = gamma_1 v_1 + (-1)^eps_2 gamma_2 v_2 + ... + (-1)^eps_d gamma_d v_d.

Dehomogenizing by the first coordinate turns each member into an exponential array
on N^(d-1). All members agree on T(d-1, d) and differ beyond it.
"""

import itertools
import logging
from dataclasses import dataclass
from math import factorial
from typing import List, Sequence, Tuple

import numpy as np
from tenacity import before_sleep_log, retry, retry_if_exception_type, stop_after_attempt

from slrc.core.errors import DimensionMismatchError, IllConditionedDrawError, InvalidInputError
from slrc.structure.indexsets import IndexSet, degree
from slrc.structure.quasi_hankel import CoefficientArray, exp_array

logger = logging.getLogger(__name__)

FIXED_EXAMPLE = np.array([[4.0, 1.0, 1.0], [1.0, 4.0, 1.0], [1.0, 1.0, 4.0]]).T

# |b_eps,1| below this relative size makes the dehomogenization blow up
LEADING_FLOOR = 1e-8


def _as_vectors(vectors) -> np.ndarray:
    """Columns are v_1..v_d; the matrix must be square."""
    vectors = np.asarray(vectors, dtype=float)
    if vectors.ndim != 2 or vectors.shape[0] != vectors.shape[1]:
        raise DimensionMismatchError(f"Expected d vectors in R^d as a d x d matrix, got shape {vectors.shape}")
    return vectors


def symmetrized_tensor(vectors) -> np.ndarray:
    """Sym(v_1 (x) ... (x) v_d) = average over permutations of the ordered outer products."""
    vectors = _as_vectors(vectors)
    d = vectors.shape[1]
    tensor = np.zeros((d,) * d)
    for perm in itertools.permutations(range(d)):
        term = vectors[:, perm[0]]
        for k in perm[1:]:
            term = np.multiply.outer(term, vectors[:, k])
        tensor += term
    return tensor / factorial(d)


def sign_patterns(d: int) -> List[Tuple[int, ...]]:
    """All (eps_2, ..., eps_d) in {0, 1}^(d-1), in lexicographic order."""
    return list(itertools.product((0, 1), repeat=d - 1))


@dataclass
class DecompositionTerm:
    signs: Tuple[int, ...]
    b: np.ndarray
    weight: float


def decomposition_terms(vectors, gamma: Sequence[float]) -> List[DecompositionTerm]:
    """The 2^(d-1) rank-one terms of the gamma-member of the family."""
    vectors = _as_vectors(vectors)
    d = vectors.shape[1]
    gamma = np.asarray(gamma, dtype=float)
    if gamma.shape != (d,):
        raise DimensionMismatchError(f"gamma needs {d} entries, got {gamma.shape}")
    if not np.isclose(np.prod(gamma), 1.0, rtol=0, atol=1e-12):
        raise InvalidInputError(f"gamma must have product 1, got {np.prod(gamma)}")
    scale = 1.0 / (2 ** (d - 1) * factorial(d))
    terms = []
    for signs in sign_patterns(d):
        flips = np.array((1.0,) + tuple((-1.0) ** e for e in signs))
        terms.append(DecompositionTerm(signs=signs, b=vectors @ (gamma * flips), weight=scale * (-1.0) ** sum(signs)))
    return terms


def tensor_from_terms(terms: List[DecompositionTerm]) -> np.ndarray:
    d = terms[0].b.shape[0]
    tensor = np.zeros((d,) * d)
    for term in terms:
        power = term.b
        for _ in range(d - 1):
            power = np.multiply.outer(power, term.b)
        tensor += term.weight * power
    return tensor


def nonunique_points_coeffs(vectors, gamma: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Points lambda_eps = b_eps[1:] / b_eps[0] and weights c_eps = w_eps b_eps[0]^d.

    Raises:
        IllConditionedDrawError: if some b_eps has a vanishing first coordinate
    """
    terms = decomposition_terms(vectors, gamma)
    d = terms[0].b.shape[0]
    leading = np.array([term.b[0] for term in terms])
    if np.min(np.abs(leading)) <= LEADING_FLOOR * max(1.0, np.max(np.abs(leading))):
        raise IllConditionedDrawError("A decomposition vector has a vanishing first coordinate")
    points = np.array([term.b[1:] / term.b[0] for term in terms], dtype=complex)
    coeffs = np.array([term.weight * term.b[0] ** d for term in terms], dtype=complex)
    return points, coeffs


def _tensor_position(alpha: Tuple[int, ...], d: int) -> Tuple[int, ...]:
    """(0,)*(d-|alpha|) + (1,)*alpha_1 + ... + (m,)*alpha_m."""
    position = [0] * (d - degree(alpha))
    for l, a in enumerate(alpha):
        position += [l + 1] * a
    return tuple(position)


def array_from_symmetric_tensor(tensor: np.ndarray, base: IndexSet) -> CoefficientArray:
    """Read h_alpha off a symmetric tensor of order d for every alpha in `base` (degrees <= d)."""
    d = tensor.ndim
    if base.m != d - 1 or any(s != d for s in tensor.shape):
        raise DimensionMismatchError(f"Tensor of shape {tensor.shape} does not match index dimension {base.m}")
    if base.max_degree > d:
        raise InvalidInputError(f"Index degree {base.max_degree} exceeds the tensor order {d}")
    return CoefficientArray(base, [tensor[_tensor_position(alpha, d)] for alpha in base])


def reference_array(vectors, gamma: Sequence[float], base: IndexSet) -> CoefficientArray:
    """The gamma-member as an exponential array over 2*base."""
    points, coeffs = nonunique_points_coeffs(vectors, gamma)
    return exp_array(base, points, coeffs)


def check_vectors(vectors, gamma: Sequence[float], max_condition: float) -> np.ndarray:
    vectors = _as_vectors(vectors)
    condition = np.linalg.cond(vectors)
    if not np.isfinite(condition) or condition > max_condition:
        raise IllConditionedDrawError(f"Vectors have condition number {condition:.3g} > {max_condition:.3g}")
    nonunique_points_coeffs(vectors, gamma)
    return vectors


def draw_vectors(
    rng: np.random.Generator,
    center: np.ndarray,
    scale: float,
    gamma: Sequence[float],
    max_condition: float = 1e8,
    attempts: int = 50,
) -> np.ndarray:
    """
    Columns of center + E with E uniform in [-scale, scale], redrawn while ill-conditioned.

    Raises:
        IllConditionedDrawError: after `attempts` failed draws
    """

    @retry(
        retry=retry_if_exception_type(IllConditionedDrawError),
        stop=stop_after_attempt(attempts),
        before_sleep=before_sleep_log(logger, logging.WARNING),
        reraise=True,
    )
    def _draw() -> np.ndarray:
        candidate = center + rng.uniform(-scale, scale, size=center.shape)
        return check_vectors(candidate, gamma, max_condition)

    return _draw()
