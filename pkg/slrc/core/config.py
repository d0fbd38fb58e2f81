"""
Configuration system for slrc.

Centralizes the numerical tolerances, solver parameters, certificate margins and
experiment defaults. Loads from environment variables with sensible defaults.
"""

import os
from dataclasses import dataclass, field
from typing import List, Optional


def _env_bool(name: str, default: str) -> bool:
    return os.getenv(name, default).lower() == 'true'


@dataclass
class RankConfig:
    """Configuration for numerical rank decisions."""

    structure_tol: float = 1e-8
    """Relative SVD threshold (tol * sigma_max) for quasi-Hankel / Vandermonde ranks"""

    hankel_tol: float = 1e-9
    """Relative threshold of the characteristic-rank scan"""

    root_cluster_radius: float = 1e-6
    """Roots of the characteristic polynomial closer than this are merged into one multiple root"""

    @classmethod
    def from_env(cls) -> 'RankConfig':
        """Load configuration from environment variables."""
        return cls(
            structure_tol=float(os.getenv('SLRC_STRUCTURE_TOL', '1e-8')),
            hankel_tol=float(os.getenv('SLRC_HANKEL_TOL', '1e-9')),
            root_cluster_radius=float(os.getenv('SLRC_ROOT_CLUSTER_RADIUS', '1e-6')),
        )


@dataclass
class SolverConfig:
    """Configuration for the nuclear-norm splitting solver."""

    mu: float = 1.0
    """Penalty parameter; singular values are thresholded at 1/mu"""

    max_iters: int = 50000
    """Iteration cap before a ConvergenceError is raised"""

    primal_tol: float = 1e-9
    """Stop when ||X - S(p)||_F falls below this ..."""

    dual_tol: float = 1e-9
    """... and mu * ||S(p) - S(p_prev)||_F falls below this"""

    use_real_extension: bool = False
    """Solve on the real 2n x 2n block embedding instead of the complex matrix"""

    rank_tol: float = 1e-8
    """Relative threshold used to read the rank off the final singular values"""

    adaptive_penalty: bool = True
    """Rebalance mu from the primal/dual residual ratio during the first iterations"""

    residual_gap: float = 2.0
    """Residual ratio that triggers a penalty update"""

    penalty_factor: float = 1.5
    """Multiplier applied to mu on a penalty update"""

    adapt_iters: int = 100
    """Penalty updates only happen before this iteration"""

    record_every: int = 50
    """Stride of the residual history kept for diagnostics"""

    @classmethod
    def from_env(cls) -> 'SolverConfig':
        """Load configuration from environment variables."""
        return cls(
            mu=float(os.getenv('SLRC_MU', '1.0')),
            max_iters=int(os.getenv('SLRC_MAX_ITERS', '50000')),
            primal_tol=float(os.getenv('SLRC_PRIMAL_TOL', '1e-9')),
            dual_tol=float(os.getenv('SLRC_DUAL_TOL', '1e-9')),
            use_real_extension=_env_bool('SLRC_REAL_EXTENSION', 'false'),
            rank_tol=float(os.getenv('SLRC_RANK_TOL', '1e-8')),
            adaptive_penalty=_env_bool('SLRC_ADAPTIVE_PENALTY', 'true'),
            residual_gap=float(os.getenv('SLRC_RESIDUAL_GAP', '2.0')),
            penalty_factor=float(os.getenv('SLRC_PENALTY_FACTOR', '1.5')),
            adapt_iters=int(os.getenv('SLRC_ADAPT_ITERS', '100')),
            record_every=int(os.getenv('SLRC_RECORD_EVERY', '50')),
        )

    def validate(self) -> List[str]:
        errors = []
        if self.mu <= 0:
            errors.append("mu must be positive")
        if self.max_iters < 1:
            errors.append("max_iters must be at least 1")
        if self.primal_tol <= 0 or self.dual_tol <= 0 or self.rank_tol <= 0:
            errors.append("solver tolerances must be positive")
        if self.residual_gap <= 1:
            errors.append("residual_gap must be > 1")
        if self.penalty_factor <= 1:
            errors.append("penalty_factor must be > 1")
        if self.record_every < 1:
            errors.append("record_every must be at least 1")
        return errors


@dataclass
class CertificateConfig:
    """Numeric margins of the optimality certificate."""

    first_order_slack: float = 1e-4
    """first_order holds when ||M*||_2 <= 1 + slack"""

    unique_slack: float = 1e-3
    """unique requires ||M*||_2 < 1 - slack"""

    sigma_min_floor: float = 1e-6
    """unique requires sigma_min(A(P)) above this"""

    residual_tol: float = 1e-8
    """Largest admissible residual of the multiplier equation"""

    dense_limit: int = 32
    """A(P) is materialized densely up to this matrix size, matrix-free above"""

    dual_residual_tol: float = 1e-6
    """Residual admitted for the multiplier read off the solver's subgradient"""

    @classmethod
    def from_env(cls) -> 'CertificateConfig':
        """Load configuration from environment variables."""
        return cls(
            first_order_slack=float(os.getenv('SLRC_FIRST_ORDER_SLACK', '1e-4')),
            unique_slack=float(os.getenv('SLRC_UNIQUE_SLACK', '1e-3')),
            sigma_min_floor=float(os.getenv('SLRC_SIGMA_MIN_FLOOR', '1e-6')),
            residual_tol=float(os.getenv('SLRC_CERT_RESIDUAL_TOL', '1e-8')),
            dense_limit=int(os.getenv('SLRC_DENSE_LIMIT', '32')),
            dual_residual_tol=float(os.getenv('SLRC_DUAL_RESIDUAL_TOL', '1e-6')),
        )


@dataclass
class ExperimentConfig:
    """Defaults of the experiment harness."""

    output_dir: str = "results"
    """Directory receiving grid.csv / meta.json / heatmaps"""

    workers: int = 1
    """Worker processes for grid cells and trials"""

    seed: int = 0
    """Root seed of every random stream"""

    grid: int = 41
    """Grid resolution per axis"""

    trials: int = 100
    """Trials per cell (fig4) or per scenario (nonunique)"""

    black_threshold: float = 1e-6
    """Distances below this count as exact recovery"""

    @classmethod
    def from_env(cls) -> 'ExperimentConfig':
        """Load configuration from environment variables."""
        return cls(
            output_dir=os.getenv('SLRC_OUTPUT_DIR', 'results'),
            workers=int(os.getenv('SLRC_WORKERS', '1')),
            seed=int(os.getenv('SLRC_SEED', '0')),
            grid=int(os.getenv('SLRC_GRID', '41')),
            trials=int(os.getenv('SLRC_TRIALS', '100')),
            black_threshold=float(os.getenv('SLRC_BLACK_THRESHOLD', '1e-6')),
        )


@dataclass
class SLRCConfig:
    """Complete slrc configuration."""

    rank: RankConfig = field(default_factory=RankConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    certificate: CertificateConfig = field(default_factory=CertificateConfig)
    experiments: ExperimentConfig = field(default_factory=ExperimentConfig)

    log_level: str = "INFO"
    """Logging level: DEBUG, INFO, WARNING, ERROR"""

    @classmethod
    def from_env(cls) -> 'SLRCConfig':
        """
        Load complete configuration from environment variables.

        Returns:
            SLRCConfig instance with all settings loaded
        """
        return cls(
            rank=RankConfig.from_env(),
            solver=SolverConfig.from_env(),
            certificate=CertificateConfig.from_env(),
            experiments=ExperimentConfig.from_env(),
            log_level=os.getenv('SLRC_LOG_LEVEL', 'INFO'),
        )

    def validate(self) -> List[str]:
        """
        Validate configuration settings.

        Returns:
            List of validation error messages (empty if valid)
        """
        errors = []

        if min(self.rank.structure_tol, self.rank.hankel_tol, self.rank.root_cluster_radius) <= 0:
            errors.append("rank tolerances must be positive")

        errors.extend(self.solver.validate())

        if self.certificate.first_order_slack < 0 or self.certificate.unique_slack < 0:
            errors.append("certificate slacks must be non-negative")
        if self.certificate.dense_limit < 1:
            errors.append("dense_limit must be at least 1")

        if self.experiments.grid < 2:
            errors.append("grid must be at least 2")
        if self.experiments.trials < 1:
            errors.append("trials must be at least 1")
        if self.experiments.workers < 1:
            errors.append("workers must be at least 1")
        if self.experiments.black_threshold <= 0:
            errors.append("black_threshold must be positive")

        valid_levels = ['DEBUG', 'INFO', 'WARNING', 'ERROR']
        if self.log_level.upper() not in valid_levels:
            errors.append(f"log_level must be one of: {valid_levels}")

        return errors

    def summary(self) -> str:
        """Get a human-readable summary of the configuration."""
        return f"""
slrc Configuration Summary:
===========================
Rank:
  - Structure tol: {self.rank.structure_tol}
  - Hankel tol: {self.rank.hankel_tol}
  - Root cluster radius: {self.rank.root_cluster_radius}

Solver:
  - mu: {self.solver.mu} (adaptive: {self.solver.adaptive_penalty})
  - Max iterations: {self.solver.max_iters}
  - Primal / dual tol: {self.solver.primal_tol} / {self.solver.dual_tol}
  - Real extension: {self.solver.use_real_extension}

Certificate:
  - First-order slack: {self.certificate.first_order_slack}
  - Unique slack: {self.certificate.unique_slack}
  - Dense limit: {self.certificate.dense_limit}

Experiments:
  - Output dir: {self.experiments.output_dir}
  - Seed: {self.experiments.seed}
  - Grid / trials: {self.experiments.grid} / {self.experiments.trials}
  - Workers: {self.experiments.workers}
""".strip()


# Global configuration instance
_config: Optional[SLRCConfig] = None


def get_config() -> SLRCConfig:
    """
    Get the global slrc configuration instance.

    Loads from environment on first call, then returns cached instance.

    Returns:
        SLRCConfig instance
    """
    global _config

    if _config is None:
        config = SLRCConfig.from_env()
        errors = config.validate()
        if errors:
            raise ValueError("Invalid configuration:\n" + "\n".join(f"  - {e}" for e in errors))
        _config = config

    return _config


def reset_config():
    """Reset the global configuration (useful for testing)."""
    global _config
    _config = None
