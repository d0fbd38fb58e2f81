"""Nuclear-norm relaxation: solver and certificates."""

from slrc.core.config import SolverConfig
from slrc.relaxation.certificate import (
    Certificate,
    certificate,
    perturbation_radius,
    projector_distance,
    projector_limit_check,
    simple_projector,
)
from slrc.relaxation.nuclear import nuclear_norm, real_extension, soft_threshold_svd, svd_via_real_extension
from slrc.relaxation.solver import SolverResult, minimize_nuclear_norm
