"""
Command-line entry point.

    slrc fig2 --grid 21 --out results/fig2 --workers 8 --heatmap
    slrc fig4 --root-type complex --trials 400
    slrc nonunique --scenario dense-A --trials 100
    slrc complete-hankel --input seq.csv --out out/
    slrc complete-qh --input problem.csv --m 2 --d 3 --out out/
    slrc --index-set-dump 2 3

Flags may also come from a config file (-c) or SLRC_* environment variables;
a .env file in the working directory is loaded first.
"""

import json
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import List, Optional

import configargparse
from dotenv import load_dotenv
from pydantic import ValidationError

import slrc
from slrc.completion.hankel import complete_sequence
from slrc.completion.quasihankel import CanonicalQHProblem, canonical_qh_completion
from slrc.core.config import SLRCConfig, get_config
from slrc.core.errors import SLRCError
from slrc.core.io import load_problem, load_sequence, save_coefficient_array, save_sequence
from slrc.experiments import run_experiment
from slrc.experiments.harness import solve_and_certify
from slrc.experiments.schemas import ExperimentId, ExperimentSpec, NonUniqueConfig, RootType, Scenario
from slrc.structure.indexsets import dump_index_set, triangle_set
from slrc.structure.quasi_hankel import CoefficientArray, build_structure

logger = logging.getLogger(__name__)

LIBRARY_COMMANDS = ("complete-hankel", "complete-qh")
COMMANDS = tuple(e.value for e in ExperimentId) + LIBRARY_COMMANDS


def build_parser(config: SLRCConfig) -> configargparse.ArgParser:
    experiments = config.experiments
    solver = config.solver
    parser = configargparse.ArgParser(
        prog="slrc",
        description="Structured low-rank completion: nuclear-norm studies and exact completions.",
    )
    parser.add("-c", "--config", is_config_file=True, help="Config file path")
    parser.add("command", nargs="?", choices=COMMANDS, help="Experiment or library command")
    parser.add("--version", action="version", version=f"slrc {slrc.__version__}")

    group = parser.add_argument_group("experiments")
    group.add("--seed", type=int, default=experiments.seed, help="Root seed of all random streams")
    group.add("--grid", type=int, default=experiments.grid, help="Grid resolution per axis")
    group.add(
        "--trials", type=int, default=None, env_var="SLRC_TRIALS",
        help="Trials per cell (fig4, default 100), realizations (fig5, default 10) or draws (nonunique, default 100)",
    )
    group.add("--out", default=experiments.output_dir, help="Output directory")
    group.add("--threshold", type=float, default=experiments.black_threshold, help="Black threshold of heatmaps")
    group.add("--workers", type=int, default=experiments.workers, help="Worker processes")
    group.add("--root-type", choices=[t.value for t in RootType], default=RootType.real.value, help="fig4 roots")
    group.add("--scenario", choices=[s.value for s in Scenario], default=Scenario.identity_A.value, help="nonunique")
    group.add("--heatmap", action="store_true", help="Also write grid.pgm")

    group = parser.add_argument_group("solver")
    group.add("--mu", type=float, default=solver.mu, help="Initial penalty parameter")
    group.add("--tol", type=float, default=None, help="Primal and dual stopping tolerance")
    group.add("--max-iters", type=int, default=solver.max_iters, help="Iteration cap")
    group.add("--real-extension", action="store_true", default=solver.use_real_extension,
              help="Iterate on the real 2n x 2n extension")

    group = parser.add_argument_group("library")
    group.add("--input", help="Input CSV for complete-hankel / complete-qh")
    group.add("--m", type=int, help="Number of variables (complete-qh)")
    group.add("--d", type=int, help="Degree of A (complete-qh)")
    group.add("--solve", action="store_true", help="Also run the nuclear-norm solver and certificate")
    group.add("--index-set-dump", nargs=2, type=int, metavar=("M", "D"), help="Print T(M, D) in order and exit")
    return parser


def _solver_config(args, config: SLRCConfig):
    tol = args.tol
    return replace(
        config.solver,
        mu=args.mu,
        max_iters=args.max_iters,
        primal_tol=tol if tol is not None else config.solver.primal_tol,
        dual_tol=tol if tol is not None else config.solver.dual_tol,
        use_real_extension=args.real_extension,
    )


def _require(args, *names):
    missing = [f"--{name.replace('_', '-')}" for name in names if getattr(args, name) is None]
    if missing:
        raise SLRCError(f"{args.command} requires {', '.join(missing)}")


def complete_hankel(args, config: SLRCConfig) -> Path:
    """Characteristic info and canonical completion of a Hankel sequence."""
    _require(args, "input")
    h = load_sequence(args.input)
    info, completion = complete_sequence(h, config.rank.hankel_tol)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    report = info.to_dict()
    report["q"] = [[z.real, z.imag] for z in report["q"]]
    if report["roots"] is not None:
        report["roots"] = [[lam.real, lam.imag, nu] for lam, nu in report["roots"]]
    if args.solve:
        d = h.shape[0] - 1
        base = triangle_set(1, d)
        structure = build_structure(base, CoefficientArray(base, h))
        outcome = solve_and_certify(structure, completion, _solver_config(args, config), config.certificate, "hankel")
        report["nuclear_norm"] = dict(zip(outcome.COLUMNS, outcome.values()))
    (out / "characteristic.json").write_text(json.dumps(report, indent=2) + "\n")
    path = save_sequence(out / "completion.csv", completion, start=h.shape[0])
    logger.info(f"rank {info.rank}, completion written to {path}")
    return path


def complete_qh(args, config: SLRCConfig) -> Path:
    """Canonical completion of an exponential array on T(m, d) and its uniqueness flag."""
    _require(args, "input", "m", "d")
    points, coeffs = load_problem(args.input)
    problem = CanonicalQHProblem(m=args.m, d=args.d, points=points, coeffs=coeffs)
    completion = canonical_qh_completion(problem, config.rank.structure_tol)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    report = {"rank": completion.rank, "unique": completion.unique, "notes": completion.notes}
    if args.solve:
        structure = build_structure(problem.A, completion.array)
        outcome = solve_and_certify(
            structure, structure.parameters_of(completion.array), _solver_config(args, config), config.certificate, "qh"
        )
        report["nuclear_norm"] = dict(zip(outcome.COLUMNS, outcome.values()))
    (out / "completion.json").write_text(json.dumps(report, indent=2) + "\n")
    path = save_coefficient_array(out / "completion.csv", completion.array)
    logger.info(f"rank {completion.rank}, unique={completion.unique}, completion written to {path}")
    return path


def run(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    config = get_config()
    parser = build_parser(config)
    args = parser.parse_args(argv)
    logging.basicConfig(level=config.log_level.upper(), format="%(asctime)s %(name)s %(levelname)s %(message)s")

    if args.index_set_dump is not None:
        m, d = args.index_set_dump
        sys.stdout.write(dump_index_set(triangle_set(m, d)))
        return 0
    if args.command is None:
        parser.print_help()
        return 2

    try:
        if args.command == "complete-hankel":
            complete_hankel(args, config)
        elif args.command == "complete-qh":
            complete_qh(args, config)
        else:
            spec = ExperimentSpec(
                experiment=args.command,
                grid=args.grid,
                trials=args.trials,
                seed=args.seed,
                out=args.out,
                threshold=args.threshold,
                workers=args.workers,
                root_type=args.root_type,
                heatmap=args.heatmap,
            )
            nonunique = NonUniqueConfig(scenario=args.scenario)
            path = run_experiment(spec, _solver_config(args, config), config.certificate, nonunique)
            logger.info(f"{spec.experiment.value} finished: {path}")
    except (SLRCError, ValidationError) as e:
        logger.error(f"{args.command} failed: {e}")
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
