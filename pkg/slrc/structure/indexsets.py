"""
Multi-index arithmetic and ordered index sets.

Multi-indices are plain tuples of non-negative ints. An IndexSet keeps its
elements strictly sorted under the graded order `order_less`; the position of an
element inside its set is the row/column it occupies in every matrix built on it.
"""

import logging
from itertools import product
from math import comb
from typing import Dict, Iterable, Iterator, List, Tuple

from slrc.core.errors import DimensionMismatchError, InvalidInputError

logger = logging.getLogger(__name__)

MultiIndex = Tuple[int, ...]

MAX_DEGREE = 64
"""Largest total degree accepted by the set constructors."""


def degree(alpha: MultiIndex) -> int:
    return sum(alpha)


def order_key(alpha: MultiIndex) -> Tuple[int, ...]:
    """
    Sort key realizing the order: compare total degree first, then the tail
    (alpha_2, ..., alpha_m) recursively. For m = 1 the degree alone decides.
    """
    suffix_sums = []
    running = 0
    for entry in reversed(alpha):
        running += entry
        suffix_sums.append(running)
    return tuple(reversed(suffix_sums))


def _check_dims(a: MultiIndex, b: MultiIndex):
    if len(a) != len(b):
        raise DimensionMismatchError(f"Multi-indices of dimension {len(a)} and {len(b)} cannot be compared")


def order_less(a: MultiIndex, b: MultiIndex) -> bool:
    """True iff a strictly precedes b."""
    _check_dims(a, b)
    return order_key(a) < order_key(b)


def add(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    _check_dims(a, b)
    return tuple(x + y for x, y in zip(a, b))


def unit(m: int, position: int) -> MultiIndex:
    return tuple(1 if i == position else 0 for i in range(m))


class IndexSet:
    """
    Immutable, strictly sorted set of multi-indices of a fixed dimension m.

    Supports len(), iteration, positional access, membership and `index()` for
    the position of an element.
    """

    __slots__ = ("_m", "_elements", "_positions")

    def __init__(self, m: int, elements: Iterable[MultiIndex] = ()):
        if m < 1:
            raise InvalidInputError(f"Dimension must be positive, got {m}")
        unique = set()
        for alpha in elements:
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != m:
                raise DimensionMismatchError(f"Expected multi-index of dimension {m}, got {alpha}")
            if any(a < 0 for a in alpha):
                raise InvalidInputError(f"Multi-index entries must be non-negative: {alpha}")
            unique.add(alpha)
        self._m = m
        self._elements: Tuple[MultiIndex, ...] = tuple(sorted(unique, key=order_key))
        self._positions: Dict[MultiIndex, int] = {alpha: i for i, alpha in enumerate(self._elements)}

    @property
    def m(self) -> int:
        return self._m

    @property
    def elements(self) -> Tuple[MultiIndex, ...]:
        return self._elements

    @property
    def max_degree(self) -> int:
        return max((degree(alpha) for alpha in self._elements), default=-1)

    def __len__(self) -> int:
        return len(self._elements)

    def __iter__(self) -> Iterator[MultiIndex]:
        return iter(self._elements)

    def __getitem__(self, position: int) -> MultiIndex:
        return self._elements[position]

    def __contains__(self, alpha) -> bool:
        return tuple(alpha) in self._positions

    def index(self, alpha: MultiIndex) -> int:
        """Position of alpha in the set (KeyError if absent)."""
        return self._positions[tuple(alpha)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, IndexSet):
            return NotImplemented
        return self._m == other._m and self._elements == other._elements

    def __hash__(self) -> int:
        return hash((self._m, self._elements))

    def __repr__(self) -> str:
        preview = ", ".join(str(alpha) for alpha in self._elements[:6])
        more = ", ..." if len(self) > 6 else ""
        return f"IndexSet(m={self._m}, n={len(self)}, [{preview}{more}])"

    def _check_same_dim(self, other: "IndexSet"):
        if self._m != other._m:
            raise DimensionMismatchError(f"Index sets of dimension {self._m} and {other._m} cannot be combined")

    def __add__(self, other: "IndexSet") -> "IndexSet":
        return minkowski_sum(self, other)

    def __sub__(self, other: "IndexSet") -> "IndexSet":
        self._check_same_dim(other)
        return IndexSet(self._m, (alpha for alpha in self._elements if alpha not in other))

    def __or__(self, other: "IndexSet") -> "IndexSet":
        self._check_same_dim(other)
        return IndexSet(self._m, self._elements + other._elements)

    def issubset(self, other: "IndexSet") -> bool:
        self._check_same_dim(other)
        return all(alpha in other for alpha in self._elements)

    def degrees(self) -> List[int]:
        return [degree(alpha) for alpha in self._elements]


def _check_range(m: int, d: int):
    if m < 1:
        raise InvalidInputError(f"Dimension must be positive, got {m}")
    if d > MAX_DEGREE:
        raise InvalidInputError(f"Degree {d} exceeds the supported maximum {MAX_DEGREE}")


def _compositions(m: int, total: int) -> Iterator[MultiIndex]:
    """All alpha in N^m with |alpha| = total."""
    if m == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for tail in _compositions(m - 1, total - head):
            yield (head,) + tail


def degree_set(m: int, d: int) -> IndexSet:
    """D(m, d): all multi-indices of total degree exactly d (empty for d < 0)."""
    _check_range(m, d)
    if d < 0:
        return IndexSet(m)
    return IndexSet(m, _compositions(m, d))


def triangle_set(m: int, d: int) -> IndexSet:
    """T(m, d): all multi-indices of total degree at most d, binom(m+d, m) elements (empty for d < 0)."""
    _check_range(m, d)
    elements: List[MultiIndex] = []
    for k in range(d + 1):
        elements.extend(_compositions(m, k))
    result = IndexSet(m, elements)
    assert len(result) == (comb(m + d, m) if d >= 0 else 0)
    return result


def minkowski_sum(a: IndexSet, b: IndexSet) -> IndexSet:
    """{alpha + beta : alpha in a, beta in b}."""
    a._check_same_dim(b)
    return IndexSet(a.m, (add(x, y) for x, y in product(a, b)))


def doubled(a: IndexSet) -> IndexSet:
    """2A = A + A."""
    return minkowski_sum(a, a)


def extension(a: IndexSet) -> IndexSet:
    """A+ = A united with every shift A + e_l."""
    if len(a) == 0:
        raise InvalidInputError("Extension of an empty index set is undefined")
    shifts = [unit(a.m, l) for l in range(a.m)]
    elements = list(a) + [add(alpha, e) for alpha in a for e in shifts]
    return IndexSet(a.m, elements)


def boundary(a: IndexSet) -> IndexSet:
    """Exterior boundary A+ minus A."""
    return extension(a) - a


def missing_indices(a: IndexSet) -> IndexSet:
    """2A minus A, i.e. the free parameters beta_1 < ... < beta_N of the completion problem."""
    return doubled(a) - a


def dump_index_set(a: IndexSet) -> str:
    """One multi-index per line, space-separated entries, in set order."""
    return "".join(" ".join(str(x) for x in alpha) + "\n" for alpha in a)


def parse_index_set(text: str) -> IndexSet:
    """Inverse of dump_index_set."""
    rows = [tuple(int(tok) for tok in line.split()) for line in text.splitlines() if line.strip()]
    if not rows:
        raise InvalidInputError("Cannot infer the dimension of an empty index set dump")
    return IndexSet(len(rows[0]), rows)
