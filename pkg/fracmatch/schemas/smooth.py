"""Smoothing optimizer schemas: schedules, step profiles and anneal results."""

import numpy as np
from pydantic import BaseModel, Field, field_validator


def default_schedule() -> list[float]:
    """Geometric from 0.5 down to 1e-4 over 20 stages."""
    return np.geomspace(0.5, 1e-4, 20).tolist()


class SmoothConfig(BaseModel):
    """Annealing parameters; steps are step_size * sigma long."""

    sigma_schedule: list[float] = Field(default_factory=default_schedule, min_length=1)
    step_size: float = Field(0.5, gt=0)
    max_iters: int = Field(200, ge=1)
    restarts: int = Field(8, ge=1)
    seed: int = 0
    workers: int = Field(4, ge=1)
    structure_tol: float = Field(1e-4, gt=0)

    model_config = {"extra": "forbid"}

    @field_validator("sigma_schedule")
    @classmethod
    def check_schedule(cls, v: list[float]) -> list[float]:
        if any(s <= 0 for s in v):
            raise ValueError("sigma values must be positive")
        if any(b >= a for a, b in zip(v, v[1:])):
            raise ValueError("sigma schedule must be strictly decreasing")
        return v


class TwoLevel(BaseModel):
    """gamma_j = lambda - gamma_a for j <= b, gamma_a for b < j <= a."""

    b: int
    lam: float = Field(alias="lambda")
    gamma_a: float = Field(alias="gammaA")
    normalization_residual: float = Field(alias="normalizationResidual")
    normalization_holds: bool = Field(alias="normalizationHolds")

    model_config = {"populate_by_name": True}


class StepProfile(BaseModel):
    """Structure of a support-[a] weight vector."""

    support: int
    is_uniform_step: bool = Field(alias="isUniformStep")
    two_level: TwoLevel | None = Field(None, alias="twoLevel")
    mu: float

    model_config = {"populate_by_name": True}


class AnnealResult(BaseModel):
    """Best restart of anneal_optimize for one support a."""

    n: int
    k: int
    a: int
    gamma_star: list[float] = Field(alias="gammaStar")
    n_star: int = Field(alias="nStar")
    profile: StepProfile
    restart_values: list[int | None] = Field(alias="restartValues")

    model_config = {"populate_by_name": True}


class AnnealSummary(BaseModel):
    """anneal_optimize over every support a, against the conjectured p(n, k)."""

    n: int
    k: int
    results: list[AnnealResult]
    best_a: int = Field(alias="bestA")
    n_star: int = Field(alias="nStar")
    p_conjectured: int = Field(alias="pConjectured")
    reached: bool

    model_config = {"populate_by_name": True}
