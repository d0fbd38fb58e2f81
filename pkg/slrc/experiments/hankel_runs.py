"""
Hankel recovery studies: single geometric root over the complex plane (fig2),
damped cosine and double-root families (fig3), random roots inside a disk (fig4).

Every cell completes an n x n Hankel matrix from h_0..h_{n-1} by nuclear-norm
minimization and compares it with the canonical completion, evaluated from the
same closed form on k = 0..2(n-1).
"""

import logging
from functools import partial
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from slrc.completion.hankel import canonical_representation
from slrc.core.config import CertificateConfig, SolverConfig
from slrc.core.io import write_rows
from slrc.core.rng import trial_stream
from slrc.experiments.harness import STREAM_TAGS, CellOutcome, run_cells, solve_and_certify, write_meta
from slrc.experiments.schemas import ExperimentId, ExperimentSpec, RootType
from slrc.structure.indexsets import triangle_set
from slrc.structure.quasi_hankel import CoefficientArray, build_structure

logger = logging.getLogger(__name__)

FIG2_SIZE = 6
FIG3_SIZE = 6
FIG4_SIZE = 9
FIG4_RANKS = (1, 2, 3, 4)
FIG3_PHI_MAX = 0.9


def hankel_cell(full_sequence, solver_config: SolverConfig, cert_config: CertificateConfig, label: str) -> CellOutcome:
    """Complete from the first half of h_0..h_{2d} and compare with the second half."""
    full_sequence = np.asarray(full_sequence, dtype=complex)
    d = (full_sequence.shape[0] - 1) // 2
    base = triangle_set(1, d)
    structure = build_structure(base, CoefficientArray(base, full_sequence[:d + 1]))
    return solve_and_certify(structure, full_sequence[d + 1:], solver_config, cert_config, label)


def geometric_sequence(lam: complex, n: int) -> np.ndarray:
    return canonical_representation([(lam, 1)], [1.0], 2 * (n - 1))


def damped_cosine_sequence(rho: float, omega: float, n: int) -> np.ndarray:
    """rho^t cos(pi (omega + 1) t) as half the sum of a conjugate root pair."""
    lam = rho * np.exp(1j * np.pi * (omega + 1))
    return canonical_representation([(lam, 1), (np.conj(lam), 1)], [0.5, 0.5], 2 * (n - 1)).real.astype(complex)


def double_root_sequence(rho: float, phi: float, n: int) -> np.ndarray:
    """(t tan(0.75 pi phi) + 1) rho^t; at rho = 0 only h_0 = 1 survives."""
    slope = np.tan(0.75 * np.pi * phi)
    if rho == 0:
        return canonical_representation([(0.0, 2)], [[1.0, 0.0]], 2 * (n - 1))
    return canonical_representation([(rho, 2)], [[1.0, slope]], 2 * (n - 1))


def _fig2_cell(point: Tuple[float, float], solver_config, cert_config) -> CellOutcome:
    a, b = point
    return hankel_cell(geometric_sequence(complex(a, b), FIG2_SIZE), solver_config, cert_config, f"fig2 a={a:.4f} b={b:.4f}")


def _fig3_cell(point: Tuple[float, float], family: str, solver_config, cert_config) -> Optional[CellOutcome]:
    rho, second = point
    if family == "cos":
        h = damped_cosine_sequence(rho, second, FIG3_SIZE)
    else:
        if abs(np.cos(0.75 * np.pi * second)) < 1e-12:
            logger.warning(f"fig3-double: slope diverges at phi={second}, cell skipped")
            return None
        h = double_root_sequence(rho, second, FIG3_SIZE)
    return hankel_cell(h, solver_config, cert_config, f"fig3-{family} rho={rho:.4f} x={second:.4f}")


def _grid_rows(points, outcomes: List[Optional[CellOutcome]]) -> List[List]:
    rows = []
    for (x, y), outcome in zip(points, outcomes):
        if outcome is None:
            rows.append([x, y] + [float("nan"), float("nan"), False, False, float("nan"), -1, 0, False])
        else:
            rows.append([x, y] + outcome.values())
    return rows


def run_fig2(spec: ExperimentSpec, solver_config: SolverConfig, cert_config: CertificateConfig) -> Path:
    """lambda = a + bi on a grid over [-extent, extent]^2, n = 6, h_k = lambda^k."""
    axis = np.linspace(-spec.extent, spec.extent, spec.grid)
    points = [(float(a), float(b)) for a in axis for b in axis]
    logger.info(f"fig2: {len(points)} cells, n={FIG2_SIZE}")
    outcomes = run_cells(partial(_fig2_cell, solver_config=solver_config, cert_config=cert_config), points, spec.workers)
    out = Path(spec.out)
    grid = write_rows(out / "grid.csv", ("a", "b") + CellOutcome.COLUMNS, _grid_rows(points, outcomes))
    write_meta(out, spec, solver_config, cert_config, [grid.name], notes={"n": FIG2_SIZE, "extent": spec.extent})
    return grid


def run_fig3(spec: ExperimentSpec, solver_config: SolverConfig, cert_config: CertificateConfig, family: str) -> Path:
    """
    family "cos": rho^t cos(pi (omega + 1) t) over (rho, omega) in [0, extent] x [0, 1];
    family "double": (t tan(0.75 pi phi) + 1) rho^t over (rho, phi) in [0, extent] x [0, 0.9].
    """
    if family not in ("cos", "double"):
        raise ValueError(f"Unknown fig3 family: {family}")
    rho_axis = np.linspace(0.0, spec.extent, spec.grid)
    second_axis = np.linspace(0.0, 1.0 if family == "cos" else FIG3_PHI_MAX, spec.grid)
    points = [(float(rho), float(x)) for rho in rho_axis for x in second_axis]
    logger.info(f"fig3-{family}: {len(points)} cells, n={FIG3_SIZE}")
    cell = partial(_fig3_cell, family=family, solver_config=solver_config, cert_config=cert_config)
    outcomes = run_cells(cell, points, spec.workers)
    out = Path(spec.out)
    second_name = "omega" if family == "cos" else "phi"
    grid = write_rows(out / "grid.csv", ("rho", second_name) + CellOutcome.COLUMNS, _grid_rows(points, outcomes))
    skipped = sum(outcome is None for outcome in outcomes)
    write_meta(
        out, spec, solver_config, cert_config, [grid.name],
        notes={"n": FIG3_SIZE, "family": family, "second_axis_max": float(second_axis[-1]), "skipped_cells": skipped},
    )
    return grid


def draw_roots(rng: np.random.Generator, r: int, rho: float, root_type: RootType) -> np.ndarray:
    """lambda_1 has modulus rho; the others lie in the disk of radius rho."""
    radii = np.concatenate([[rho], rng.uniform(-rho, rho, size=r - 1)])
    if root_type == RootType.real:
        return radii.astype(complex)
    phases = rng.uniform(0.0, 1.0, size=r)
    return radii * np.exp(1j * np.pi * phases)


def _fig4_cell(item: Tuple[int, int, float], spec: ExperimentSpec, solver_config, cert_config) -> List:
    r, cell_index, rho = item
    trials = spec.trial_count()
    worst_frobenius = worst_param = 0.0
    all_first_order = True
    unique_count = unconverged = 0
    tag = STREAM_TAGS["fig4"] * 10 + (0 if spec.root_type == RootType.real else 1)
    for t in range(trials):
        rng = trial_stream(spec.seed, tag, r, cell_index, t)
        roots = draw_roots(rng, r, rho, spec.root_type)
        h = canonical_representation([(lam, 1) for lam in roots], [1.0] * r, 2 * (FIG4_SIZE - 1))
        outcome = hankel_cell(h, solver_config, cert_config, f"fig4-{spec.root_type.value} r={r} rho={rho:.4f} t={t}")
        worst_frobenius = max(worst_frobenius, outcome.frobenius_distance)
        worst_param = max(worst_param, outcome.param_distance)
        all_first_order &= outcome.first_order
        unique_count += outcome.unique
        unconverged += not outcome.converged
    return [r, rho, worst_frobenius, worst_param, all_first_order, unique_count, unconverged, trials]


def run_fig4(spec: ExperimentSpec, solver_config: SolverConfig, cert_config: CertificateConfig) -> Path:
    """Max completion error over random roots, per (rank r, radius rho) cell, n = 9."""
    rho_axis = np.linspace(0.0, 1.0, spec.grid + 2)[1:-1]
    items = [(r, i, float(rho)) for r in FIG4_RANKS for i, rho in enumerate(rho_axis)]
    logger.info(f"fig4-{spec.root_type.value}: {len(items)} cells x {spec.trial_count()} trials")
    cell = partial(_fig4_cell, spec=spec, solver_config=solver_config, cert_config=cert_config)
    rows = run_cells(cell, items, spec.workers)
    header = (
        "r", "rho", "max_frobenius_distance", "max_param_distance",
        "all_first_order", "unique_count", "unconverged", "trials",
    )
    out = Path(spec.out)
    grid = write_rows(out / "grid.csv", header, rows)
    write_meta(
        out, spec, solver_config, cert_config, [grid.name],
        notes={"n": FIG4_SIZE, "root_type": spec.root_type.value, "trials": spec.trial_count()},
    )
    return grid


def run_hankel_experiment(spec: ExperimentSpec, solver_config: SolverConfig, cert_config: CertificateConfig) -> Path:
    if spec.experiment == ExperimentId.fig2:
        return run_fig2(spec, solver_config, cert_config)
    if spec.experiment == ExperimentId.fig3_cos:
        return run_fig3(spec, solver_config, cert_config, "cos")
    if spec.experiment == ExperimentId.fig3_double:
        return run_fig3(spec, solver_config, cert_config, "double")
    if spec.experiment == ExperimentId.fig4:
        return run_fig4(spec, solver_config, cert_config)
    raise ValueError(f"Not a Hankel experiment: {spec.experiment}")
