"""
Quasi-Hankel studies on T(2, 3): random exponents shrinking to the origin (fig5) and
the rank-4 family with infinitely many minimal completions (nonunique).
"""

import logging
from functools import partial
from pathlib import Path
from typing import List, Tuple

import numpy as np
from tenacity import before_sleep_log, retry, retry_if_exception_type, stop_after_attempt

from slrc.completion.quasihankel import CanonicalQHProblem, canonical_qh_completion
from slrc.core.config import CertificateConfig, SolverConfig
from slrc.core.errors import HypothesisViolationError
from slrc.core.io import write_rows
from slrc.core.rng import trial_stream
from slrc.experiments.harness import STREAM_TAGS, CellOutcome, compare_and_certify, run_cells, write_meta
from slrc.experiments.nonunique import array_from_symmetric_tensor, draw_vectors, reference_array, symmetrized_tensor
from slrc.experiments.schemas import ExperimentSpec, NonUniqueConfig, Scenario
from slrc.relaxation.solver import solve_or_last_iterate
from slrc.structure.indexsets import triangle_set
from slrc.structure.quasi_hankel import build_structure

logger = logging.getLogger(__name__)

FIG5_M = 2
FIG5_D = 3
FIG5_RANK = 3
FIG5_RHOS = tuple(round(0.05 * k, 2) for k in range(1, 21))
FIG5_SUCCESS = 1e-5


def draw_directions(rng: np.random.Generator, r: int = FIG5_RANK, m: int = FIG5_M, attempts: int = 50) -> np.ndarray:
    """
    r points y_k with real and imaginary parts uniform in [-0.5, 0.5], redrawn until
    they are T(m, d')-independent (independence is invariant under z = rho y).
    """

    @retry(
        retry=retry_if_exception_type(HypothesisViolationError),
        stop=stop_after_attempt(attempts),
        before_sleep=before_sleep_log(logger, logging.WARNING),
        reraise=True,
    )
    def _draw() -> np.ndarray:
        y = rng.uniform(-0.5, 0.5, size=(r, m)) + 1j * rng.uniform(-0.5, 0.5, size=(r, m))
        canonical_qh_completion(CanonicalQHProblem(m=m, d=FIG5_D, points=y, coeffs=np.ones(r)))
        return y

    return _draw()


def empirical_rho0(rhos, distances, threshold: float = FIG5_SUCCESS) -> float:
    """Largest swept rho such that every distance up to it is below threshold; 0 if the first fails."""
    rho0 = 0.0
    for rho, distance in zip(rhos, distances):
        if not distance < threshold:
            break
        rho0 = rho
    return rho0


def _fig5_realization(realization: int, spec: ExperimentSpec, solver_config, cert_config) -> List[Tuple]:
    rng = trial_stream(spec.seed, STREAM_TAGS["fig5"], realization)
    y = draw_directions(rng)
    rows = []
    for rho in FIG5_RHOS:
        problem = CanonicalQHProblem(m=FIG5_M, d=FIG5_D, points=rho * y, coeffs=np.ones(FIG5_RANK))
        completion = canonical_qh_completion(problem)
        structure = build_structure(problem.A, completion.array)
        p_tilde = structure.parameters_of(completion.array)
        result = solve_or_last_iterate(structure, solver_config)
        outcome = compare_and_certify(
            structure, result, p_tilde, solver_config, cert_config, f"fig5 realization={realization} rho={rho:.2f}"
        )
        rows.append((realization, rho, outcome))
    return rows


def run_fig5(spec: ExperimentSpec, solver_config: SolverConfig, cert_config: CertificateConfig) -> Path:
    """||p_hat - p_tilde||_2 over rho in {0.05, ..., 1.0} for each realization; rho0 per realization."""
    realizations = spec.trial_count()
    logger.info(f"fig5: {realizations} realizations x {len(FIG5_RHOS)} radii")
    cell = partial(_fig5_realization, spec=spec, solver_config=solver_config, cert_config=cert_config)
    per_realization = run_cells(cell, range(realizations), spec.workers)

    out = Path(spec.out)
    rows = [[k, rho] + outcome.values() for block in per_realization for k, rho, outcome in block]
    grid = write_rows(out / "grid.csv", ("realization", "rho") + CellOutcome.COLUMNS, rows)

    rho0_rows = []
    for block in per_realization:
        distances = [outcome.param_distance for _, _, outcome in block]
        rho0_rows.append([block[0][0], empirical_rho0(FIG5_RHOS, distances)])
    rho0 = write_rows(out / "rho0.csv", ("realization", "rho0"), rho0_rows)

    write_meta(
        out, spec, solver_config, cert_config, [grid.name, rho0.name],
        notes={"m": FIG5_M, "d": FIG5_D, "r": FIG5_RANK, "coeffs": "all ones", "success_threshold": FIG5_SUCCESS},
        summary={"rho0": {str(k): value for k, value in rho0_rows}},
    )
    return grid


NONUNIQUE_COLUMNS = (
    "trial", "tail_norm", "success", "rank", "matches_reference", "param_distance",
    "frobenius_distance", "first_order", "unique", "condition", "iterations", "converged",
)


def scenario_center(scenario: Scenario, d: int) -> np.ndarray:
    """3 * ones (dense-A) or 3 * I (identity-A)."""
    if scenario == Scenario.dense_A:
        return 3.0 * np.ones((d, d))
    return 3.0 * np.eye(d)


def nonunique_trial(vectors, config: NonUniqueConfig, solver_config, cert_config, label: str = "") -> List:
    """One instance: known part from the symmetrized tensor, reference from the gamma-member."""
    vectors = np.asarray(vectors, dtype=float)
    base = triangle_set(config.m, config.d)
    known = array_from_symmetric_tensor(symmetrized_tensor(vectors), base)
    structure = build_structure(base, known)
    p_ref = structure.parameters_of(reference_array(vectors, config.gamma, base))

    result = solve_or_last_iterate(structure, solver_config)
    outcome = compare_and_certify(structure, result, p_ref, solver_config, cert_config, label)
    minimal_rank = 2 ** (config.d - 1)
    tail = float(np.linalg.norm(result.singular_values[minimal_rank:]))
    success = tail < config.success_threshold
    matches = outcome.param_distance < config.success_threshold * max(1.0, float(np.linalg.norm(p_ref)))
    if success and not outcome.first_order:
        logger.warning(f"[{label}] low-rank completion found but the first-order certificate failed")
    return [
        tail, success, result.rank, matches, outcome.param_distance, outcome.frobenius_distance,
        outcome.first_order, outcome.unique, float(np.linalg.cond(vectors)), result.iterations, result.converged,
    ]


def _nonunique_cell(trial: int, spec: ExperimentSpec, config: NonUniqueConfig, solver_config, cert_config) -> List:
    scenario_tag = 0 if config.scenario == Scenario.dense_A else 1
    rng = trial_stream(spec.seed, STREAM_TAGS["nonunique"], scenario_tag, trial)
    vectors = draw_vectors(
        rng, scenario_center(config.scenario, config.d), config.perturbation_scale, config.gamma, config.max_condition
    )
    label = f"nonunique {config.scenario.value} trial={trial}"
    return [trial] + nonunique_trial(vectors, config, solver_config, cert_config, label)


def run_nonunique(
    spec: ExperimentSpec,
    config: NonUniqueConfig,
    solver_config: SolverConfig,
    cert_config: CertificateConfig,
) -> Path:
    """Count trials whose completion has rank 2^(d-1), and how many of those equal the reference."""
    trials = spec.trial_count()
    logger.info(f"nonunique {config.scenario.value}: {trials} trials, d={config.d}, gamma={config.gamma}")
    cell = partial(_nonunique_cell, spec=spec, config=config, solver_config=solver_config, cert_config=cert_config)
    rows = run_cells(cell, range(trials), spec.workers)

    out = Path(spec.out)
    path = write_rows(out / "trials.csv", NONUNIQUE_COLUMNS, rows)
    success_count = sum(bool(row[2]) for row in rows)
    matching = sum(bool(row[2]) and bool(row[4]) for row in rows)
    logger.info(f"nonunique {config.scenario.value}: {success_count}/{trials} succeeded, {matching} equal the reference")
    write_meta(
        out, spec, solver_config, cert_config, [path.name],
        notes={"nonunique": config.model_dump(mode="json")},
        summary={"trials": trials, "success_count": success_count, "matches_reference": matching},
    )
    return path
