"""
Numerical studies of nuclear-norm completion: parameter grids, seeded random trials,
CSV output, metadata and optional heatmaps.
"""

import logging
from pathlib import Path
from typing import Optional

from slrc.core.config import CertificateConfig, SolverConfig
from slrc.experiments.hankel_runs import run_fig2, run_fig3, run_fig4, run_hankel_experiment
from slrc.experiments.heatmap import emit_heatmap
from slrc.experiments.quasihankel_runs import run_fig5, run_nonunique
from slrc.experiments.schemas import ExperimentId, ExperimentSpec, NonUniqueConfig, RootType, Scenario

logger = logging.getLogger(__name__)


def run_experiment(
    spec: ExperimentSpec,
    solver_config: Optional[SolverConfig] = None,
    cert_config: Optional[CertificateConfig] = None,
    nonunique_config: Optional[NonUniqueConfig] = None,
) -> Path:
    """Run one study and return the path of its main CSV."""
    solver_config = solver_config or SolverConfig()
    cert_config = cert_config or CertificateConfig()
    if spec.experiment == ExperimentId.fig5:
        path = run_fig5(spec, solver_config, cert_config)
    elif spec.experiment == ExperimentId.nonunique:
        return run_nonunique(spec, nonunique_config or NonUniqueConfig(), solver_config, cert_config)
    else:
        path = run_hankel_experiment(spec, solver_config, cert_config)
    if spec.heatmap:
        emit_heatmap(path, spec.threshold)
    return path


__all__ = [
    "ExperimentId",
    "ExperimentSpec",
    "NonUniqueConfig",
    "RootType",
    "Scenario",
    "emit_heatmap",
    "run_experiment",
    "run_fig2",
    "run_fig3",
    "run_fig4",
    "run_fig5",
    "run_nonunique",
]
