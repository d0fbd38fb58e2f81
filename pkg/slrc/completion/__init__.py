"""Exact (canonical) minimal-rank completions."""

from slrc.completion.hankel import (
    CharacteristicInfo,
    canonical_completion,
    canonical_representation,
    characteristic_info,
    characteristic_vector,
    complete_sequence,
    hankel_rank,
    is_unique_completion,
    nullspace_toeplitz,
)
from slrc.completion.quasihankel import (
    CanonicalQHProblem,
    QHCompletion,
    canonical_qh_completion,
    flat_extension_rank,
    generic_rank_bound,
)
