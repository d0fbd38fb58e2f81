"""
Pydantic models describing experiment runs and their metadata.
"""

from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class ExperimentId(str, Enum):
    fig2 = "fig2"
    fig3_cos = "fig3-cos"
    fig3_double = "fig3-double"
    fig4 = "fig4"
    fig5 = "fig5"
    nonunique = "nonunique"


class RootType(str, Enum):
    real = "real"
    complex = "complex"


class Scenario(str, Enum):
    dense_A = "dense-A"
    identity_A = "identity-A"


DEFAULT_TRIALS = {ExperimentId.fig4: 100, ExperimentId.fig5: 10, ExperimentId.nonunique: 100}


class ExperimentSpec(BaseModel):
    """One experiment run."""

    experiment: ExperimentId = Field(..., description="Which study to run")
    grid: int = Field(default=41, ge=2, description="Grid resolution per axis")
    trials: Optional[int] = Field(
        default=None, ge=1, description="Random trials per cell (fig4), realizations (fig5) or draws (nonunique)"
    )
    seed: int = Field(default=0, ge=0, description="Root seed of all random streams")
    out: str = Field(default="results", description="Output directory")
    threshold: float = Field(default=1e-6, gt=0, description="Distances below this are rendered black")
    workers: int = Field(default=1, ge=1, description="Worker processes")
    root_type: RootType = Field(default=RootType.real, description="fig4 root family")
    extent: float = Field(default=0.95, gt=0, lt=1, description="fig2 grid covers [-extent, extent]^2")
    heatmap: bool = Field(default=False, description="Also render grid.pgm")

    model_config = ConfigDict(
        json_schema_extra={
            "example": {"experiment": "fig2", "grid": 21, "seed": 0, "out": "results/fig2", "workers": 8}
        }
    )

    def trial_count(self) -> int:
        """Explicit trial count, or the per-experiment default (fig4 100, fig5 10, nonunique 100)."""
        if self.trials is not None:
            return self.trials
        return DEFAULT_TRIALS.get(self.experiment, 1)


class NonUniqueConfig(BaseModel):
    """Random instances of the non-unique family on T(2,3)."""

    d: int = Field(default=3, ge=2, description="Tensor order; the array lives on T(d-1, d)")
    scenario: Scenario = Field(default=Scenario.identity_A)
    perturbation_scale: float = Field(default=1.0, ge=0, description="E has iid entries uniform in [-scale, scale]")
    gamma: Tuple[float, ...] = Field(default=(1.0, 1.0, 1.0), description="Weights of the reference decomposition")
    success_threshold: float = Field(default=1e-4, gt=0, description="Bound on the tail singular values")
    max_condition: float = Field(default=1e8, gt=1, description="Draws above this condition number are redrawn")

    @field_validator("gamma")
    @classmethod
    def gamma_product_is_one(cls, gamma):
        product = 1.0
        for g in gamma:
            product *= g
        if abs(product - 1.0) > 1e-12:
            raise ValueError(f"gamma must have product 1, got {product}")
        return gamma

    @model_validator(mode="after")
    def gamma_matches_order(self):
        if len(self.gamma) != self.d:
            raise ValueError(f"gamma needs {self.d} entries, got {len(self.gamma)}")
        return self

    @property
    def m(self) -> int:
        return self.d - 1


class RunMetadata(BaseModel):
    """Contents of meta.json."""

    experiment: str
    seed: int
    version: str
    spec: Dict
    solver: Dict
    certificate: Dict
    notes: Dict = Field(default_factory=dict)
    outputs: List[str] = Field(default_factory=list)
    summary: Optional[Dict] = None
