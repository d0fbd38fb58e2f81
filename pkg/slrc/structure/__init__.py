"""Index sets and quasi-Hankel structures."""

from slrc.structure.indexsets import (
    IndexSet,
    MultiIndex,
    boundary,
    degree_set,
    extension,
    minkowski_sum,
    missing_indices,
    order_less,
    triangle_set,
)
from slrc.structure.quasi_hankel import (
    CoefficientArray,
    QuasiHankelStructure,
    StructuredMatrixValue,
    adjoint,
    assemble,
    basis_matrix,
    build_structure,
    exp_array,
    is_A_independent,
    numerical_rank,
    project_onto_structure,
    quasi_hankel,
    quasi_vandermonde,
)
