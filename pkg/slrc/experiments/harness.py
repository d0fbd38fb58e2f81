"""
Shared machinery for the experiment runners: solve-and-certify cells, a worker
pool that returns results in submission order, and output writers.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, TypeVar

import numpy as np

import slrc
from slrc.core.config import CertificateConfig, SolverConfig
from slrc.relaxation.certificate import certificate
from slrc.relaxation.solver import SolverResult, solve_or_last_iterate
from slrc.structure.quasi_hankel import QuasiHankelStructure
from slrc.experiments.schemas import ExperimentSpec, RunMetadata

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

# stream tags keep the random streams of different experiments apart
STREAM_TAGS = {"fig4": 4, "fig5": 5, "nonunique": 7}


@dataclass
class CellOutcome:
    """Solver output compared against a reference completion, with certificate verdicts."""

    frobenius_distance: float
    param_distance: float
    first_order: bool
    unique: bool
    norm_M: float
    rank: int
    iterations: int
    converged: bool

    COLUMNS = (
        "frobenius_distance", "param_distance", "first_order", "unique",
        "norm_M", "rank", "iterations", "converged",
    )

    def values(self) -> List:
        return [getattr(self, name) for name in self.COLUMNS]


def compare_and_certify(
    structure: QuasiHankelStructure,
    result: SolverResult,
    p_ref: np.ndarray,
    solver_config: SolverConfig,
    cert_config: CertificateConfig,
    label: str = "",
) -> CellOutcome:
    """Compare a solver result with p_ref, certify it, and log the verdicts."""
    p_ref = np.asarray(p_ref, dtype=complex)
    frobenius = float(np.linalg.norm(structure.matrix(result.p_hat) - structure.matrix(p_ref)))
    param = float(np.linalg.norm(result.p_hat - p_ref))
    cert = certificate(structure, result.p_hat, solver_config.rank_tol, cert_config, dual=result.dual_matrix)
    logger.info(
        f"[{label}] distance={frobenius:.3e} first_order={cert.first_order} unique={cert.unique} "
        f"||M*||={cert.spectral_norm_M:.3g} rank_AP={cert.rank_AP}/{structure.N} iters={result.iterations}"
    )
    return CellOutcome(
        frobenius_distance=frobenius,
        param_distance=param,
        first_order=cert.first_order,
        unique=cert.unique,
        norm_M=cert.spectral_norm_M,
        rank=result.rank,
        iterations=result.iterations,
        converged=result.converged,
    )


def solve_and_certify(
    structure: QuasiHankelStructure,
    p_ref: np.ndarray,
    solver_config: SolverConfig,
    cert_config: CertificateConfig,
    label: str = "",
) -> CellOutcome:
    result = solve_or_last_iterate(structure, solver_config)
    return compare_and_certify(structure, result, p_ref, solver_config, cert_config, label)


def run_cells(fn: Callable[[T], R], items: Sequence[T], workers: int = 1) -> List[R]:
    """Map fn over items, in parallel when workers > 1; results keep the order of items."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    chunksize = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunksize))


def write_meta(
    out_dir: Path,
    spec: ExperimentSpec,
    solver_config: SolverConfig,
    cert_config: CertificateConfig,
    outputs: Iterable[str],
    notes: Optional[Dict] = None,
    summary: Optional[Dict] = None,
) -> Path:
    """meta.json: seed, run spec, solver settings, library version."""
    meta = RunMetadata(
        experiment=spec.experiment.value,
        seed=spec.seed,
        version=slrc.__version__,
        spec=spec.model_dump(mode="json"),
        solver=asdict(solver_config),
        certificate=asdict(cert_config),
        notes=notes or {},
        outputs=list(outputs),
        summary=summary,
    )
    path = Path(out_dir) / "meta.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(meta.model_dump_json(indent=2) + "\n")
    logger.info(f"Wrote {path}")
    return path
