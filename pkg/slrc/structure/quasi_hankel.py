"""
Quasi-Hankel and quasi-Vandermonde matrices, and the affine structure map

    S(p) = S_0 + sum_k p_k S_k

of a quasi-Hankel completion problem. Basis matrices S_k are never stored; the
structure keeps an orbit table (matrix position -> multi-index alpha_i + alpha_j)
and every operation works off that table.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Mapping, Sequence

import numpy as np

from slrc.core.errors import CoverageError, DimensionMismatchError, InvalidInputError
from slrc.structure.indexsets import IndexSet, MultiIndex, add, doubled, missing_indices

logger = logging.getLogger(__name__)


class CoefficientArray:
    """
    Finite map from multi-indices to complex values, defined exactly on `domain`.

    Lookups outside the domain raise CoverageError; they are never read as zero.
    """

    def __init__(self, domain: IndexSet, values: Sequence[complex]):
        values = np.array(values, dtype=complex).reshape(-1)
        if values.shape[0] != len(domain):
            raise InvalidInputError(f"Expected {len(domain)} values for the domain, got {values.shape[0]}")
        self.domain = domain
        self.values = values
        self.values.setflags(write=False)

    @classmethod
    def from_mapping(cls, domain: IndexSet, mapping: Mapping[MultiIndex, complex]) -> "CoefficientArray":
        missing = [alpha for alpha in domain if tuple(alpha) not in mapping]
        if missing:
            raise CoverageError(f"Mapping does not cover {len(missing)} indices of the domain, e.g. {missing[0]}")
        return cls(domain, [mapping[alpha] for alpha in domain])

    @classmethod
    def zeros(cls, domain: IndexSet) -> "CoefficientArray":
        return cls(domain, np.zeros(len(domain), dtype=complex))

    @property
    def m(self) -> int:
        return self.domain.m

    def __len__(self) -> int:
        return len(self.domain)

    def __getitem__(self, alpha: MultiIndex) -> complex:
        alpha = tuple(alpha)
        if len(alpha) != self.m:
            raise DimensionMismatchError(f"Index {alpha} has dimension {len(alpha)}, array has {self.m}")
        if alpha not in self.domain:
            raise CoverageError(f"Index {alpha} is outside the array's domain")
        return complex(self.values[self.domain.index(alpha)])

    def covers(self, indices: IndexSet) -> bool:
        return indices.issubset(self.domain)

    def restrict(self, indices: IndexSet) -> "CoefficientArray":
        """Restriction to a subset of the domain."""
        if not self.covers(indices):
            raise CoverageError("Restriction target is not contained in the array's domain")
        positions = [self.domain.index(alpha) for alpha in indices]
        return CoefficientArray(indices, self.values[positions])

    def to_dict(self) -> Dict[MultiIndex, complex]:
        return {alpha: complex(v) for alpha, v in zip(self.domain, self.values)}


def _sum_table(base: IndexSet, target: IndexSet) -> np.ndarray:
    """n x n table of positions (in `target`) of alpha_i + alpha_j."""
    n = len(base)
    table = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(base):
        for j in range(i, n):
            position = target.index(add(a, base[j]))
            table[i, j] = position
            table[j, i] = position
    return table


def as_points(points, m: int) -> np.ndarray:
    """Coerce points to an r x m complex array; a flat sequence is r scalar points when m = 1."""
    points = np.asarray(points, dtype=complex)
    if points.ndim == 1:
        points = points.reshape(-1, 1) if m == 1 else points.reshape(1, -1)
    return points


def quasi_hankel(base: IndexSet, h: CoefficientArray) -> np.ndarray:
    """The symmetric matrix [h_{alpha_i + alpha_j}] indexed by `base`."""
    full = doubled(base)
    if not h.covers(full):
        raise CoverageError("Array does not cover 2A")
    values = h.restrict(full).values
    return values[_sum_table(base, full)] if len(base) else np.zeros((0, 0), dtype=complex)


def quasi_vandermonde(base: IndexSet, points) -> np.ndarray:
    """
    Matrix of monomials: entry (i, j) is z_j^{alpha_i}.

    Args:
        base: Index set giving the rows
        points: r x m array-like of complex points

    Returns:
        #base x r complex matrix
    """
    points = as_points(points, base.m)
    if points.shape[1] != base.m:
        raise DimensionMismatchError(f"Points have dimension {points.shape[1]}, index set has {base.m}")
    exponents = np.array(base.elements, dtype=np.int64).reshape(len(base), base.m)
    return np.prod(points[None, :, :] ** exponents[:, None, :], axis=2)


def numerical_rank(matrix: np.ndarray, tol: float = 1e-8) -> int:
    """Number of singular values above tol * sigma_max."""
    if matrix.size == 0:
        return 0
    s = np.linalg.svd(matrix, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def is_A_independent(base: IndexSet, points, tol: float = 1e-8) -> bool:
    """True iff the quasi-Vandermonde matrix on `base` has full column rank."""
    r = as_points(points, base.m).shape[0]
    if r > len(base):
        return False
    return numerical_rank(quasi_vandermonde(base, points), tol) == r


def exp_array(base: IndexSet, points, coeffs) -> CoefficientArray:
    """h_alpha = sum_k c_k z_k^alpha on 2C."""
    coeffs = np.asarray(coeffs, dtype=complex).reshape(-1)
    full = doubled(base)
    vandermonde = quasi_vandermonde(full, points)
    if vandermonde.shape[1] != coeffs.shape[0]:
        raise InvalidInputError(f"{vandermonde.shape[1]} points but {coeffs.shape[0]} coefficients")
    return CoefficientArray(full, vandermonde @ coeffs)


@dataclass(frozen=True)
class StructuredMatrixValue:
    """Dense S(p) together with the parameters that generated it."""

    matrix: np.ndarray
    p: np.ndarray


class QuasiHankelStructure:
    """
    The affine map p -> S(p) for a known array on A and unknowns on 2A minus A.

    Attributes:
        base: A, indexing rows and columns (n = #A)
        full: 2A
        missing: beta_1 < ... < beta_N
        labels: n x n positions of alpha_i + alpha_j inside `full`
        missing_labels: n x n index k-1 of the unknown at each position, -1 on known positions
        orbit_sizes: number of matrix positions carrying each unknown
    """

    def __init__(self, base: IndexSet, known: CoefficientArray):
        if known.m != base.m:
            raise DimensionMismatchError(f"Known array has dimension {known.m}, index set has {base.m}")
        if not known.covers(base):
            raise CoverageError("Known data does not cover A")

        self.base = base
        self.full = doubled(base)
        self.missing = missing_indices(base)
        self.n = len(base)
        self.N = len(self.missing)

        self.labels = _sum_table(base, self.full) if self.n else np.zeros((0, 0), dtype=np.int64)
        to_missing = np.full(len(self.full), -1, dtype=np.int64)
        for k, beta in enumerate(self.missing):
            to_missing[self.full.index(beta)] = k
        self.missing_labels = to_missing[self.labels]

        constant = np.zeros(len(self.full), dtype=complex)
        for alpha in base:
            constant[self.full.index(alpha)] = known[alpha]
        self.known = known.restrict(base)
        self.s0 = constant[self.labels]
        self.s0.setflags(write=False)

        self._free_mask = self.missing_labels >= 0
        self._free_labels = self.missing_labels[self._free_mask]
        self.orbit_sizes = np.bincount(self._free_labels, minlength=self.N).astype(float)
        assert np.all(self.orbit_sizes > 0)

        logger.debug(f"Built structure: n={self.n}, N={self.N}, m={base.m}")

    def basis_matrix(self, k: int) -> np.ndarray:
        """Dense 0/1 matrix S_k (1-based k), ones exactly on the orbit of beta_k."""
        if not 1 <= k <= self.N:
            raise InvalidInputError(f"Basis index must lie in 1..{self.N}, got {k}")
        return (self.missing_labels == k - 1).astype(float)

    def _check_params(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=complex).reshape(-1)
        if p.shape[0] != self.N:
            raise InvalidInputError(f"Expected {self.N} parameters, got {p.shape[0]}")
        return p

    def _check_matrix(self, X) -> np.ndarray:
        X = np.asarray(X)
        if X.shape != (self.n, self.n):
            raise InvalidInputError(f"Expected a {self.n}x{self.n} matrix, got shape {X.shape}")
        return X

    def free_part(self, p) -> np.ndarray:
        """sum_k p_k S_k."""
        p = self._check_params(p)
        out = np.zeros((self.n, self.n), dtype=complex)
        out[self._free_mask] = p[self._free_labels]
        return out

    def assemble(self, p) -> StructuredMatrixValue:
        p = self._check_params(p)
        return StructuredMatrixValue(matrix=self.s0 + self.free_part(p), p=p)

    def matrix(self, p) -> np.ndarray:
        return self.assemble(p).matrix

    def adjoint(self, X) -> np.ndarray:
        """Unconjugated orbit sums: component k is sum of X over the orbit of beta_k."""
        X = self._check_matrix(X)
        entries = X[self._free_mask]
        if np.iscomplexobj(entries):
            real = np.bincount(self._free_labels, weights=entries.real, minlength=self.N)
            imag = np.bincount(self._free_labels, weights=entries.imag, minlength=self.N)
            return real + 1j * imag
        return np.bincount(self._free_labels, weights=entries, minlength=self.N).astype(complex)

    def project(self, X) -> np.ndarray:
        """Least-squares parameters: orbit means of X."""
        return self.adjoint(X) / self.orbit_sizes

    def completed_array(self, p) -> CoefficientArray:
        """Known values on A plus p on the missing indices, as an array over 2A."""
        p = self._check_params(p)
        mapping = self.known.to_dict()
        mapping.update({beta: value for beta, value in zip(self.missing, p)})
        return CoefficientArray.from_mapping(self.full, mapping)

    def parameters_of(self, h: CoefficientArray) -> np.ndarray:
        """Values of a full array at beta_1..beta_N."""
        return h.restrict(self.missing).values.copy()


def build_structure(base: IndexSet, known: CoefficientArray) -> QuasiHankelStructure:
    """Structure for data `known` on A; S_0 carries known values and zeros on 2A minus A."""
    if not known.covers(base):
        raise CoverageError("Known data does not cover A")
    return QuasiHankelStructure(base, known.restrict(base))


def basis_matrix(structure: QuasiHankelStructure, k: int) -> np.ndarray:
    return structure.basis_matrix(k)


def assemble(structure: QuasiHankelStructure, p) -> StructuredMatrixValue:
    return structure.assemble(p)


def adjoint(structure: QuasiHankelStructure, X) -> np.ndarray:
    return structure.adjoint(X)


def project_onto_structure(structure: QuasiHankelStructure, X) -> np.ndarray:
    return structure.project(X)
