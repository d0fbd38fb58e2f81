"""
Exception hierarchy for slrc.

Every error derives from SLRCError and from the builtin a caller would expect
(ValueError for bad input, RuntimeError for numerical failure), so existing
`except ValueError` handlers keep working.
"""

from typing import Any, List, Optional, Tuple


class SLRCError(Exception):
    """Base class of all slrc errors."""


class DimensionMismatchError(SLRCError, ValueError):
    """Multi-indices or index sets of different dimension were combined."""


class CoverageError(SLRCError, ValueError):
    """An array was queried (or required) outside its domain of definition."""


class InvalidInputError(SLRCError, ValueError):
    """Malformed parameters: wrong lengths, shapes, zero coefficients."""


class InconsistentRankError(SLRCError, ValueError):
    """The recurrence system of the requested order has an empty kernel."""


class DegenerateCaseError(SLRCError, ValueError):
    """Leading coefficient q_r of the characteristic vector vanishes."""


class HypothesisViolationError(SLRCError, ValueError):
    """Points fail an independence hypothesis required by the construction."""


class IllConditionedDrawError(SLRCError, RuntimeError):
    """A random draw is numerically unusable and must be redrawn."""


class ConvergenceError(SLRCError, RuntimeError):
    """The splitting solver exhausted its iteration budget.

    Attributes:
        history: (iteration, primal residual, dual residual, mu) samples
        result: the last iterate packaged as a SolverResult
    """

    def __init__(self, message: str, history: List[Tuple[int, float, float, float]], result: Optional[Any] = None):
        super().__init__(message)
        self.history = history
        self.result = result
