"""Run-file and selftest schemas."""

from typing import Any

from pydantic import BaseModel, Field

from fracmatch.schemas.smooth import SmoothConfig


class OracleSection(BaseModel):
    n_cap: int | None = Field(None, ge=2)
    edge_cap: int | None = Field(None, ge=1)

    model_config = {"extra": "forbid"}


class BoundsSection(BaseModel):
    sigma: str = "55"
    n: int = Field(120001, ge=3)
    delta: str = "1/20"
    lower_sum_n: list[int] = [100, 1000, 5000]
    b_max: int = Field(8, ge=0)

    model_config = {"extra": "forbid"}


class RunConfig(BaseModel):
    """Validated contents of a ``--config`` YAML file.

    The ``sweep`` mapping is validated as a SweepConfig once CLI flags are merged in.
    """

    subcommand: str | None = None
    seed: int | None = None
    jobs: int | None = Field(None, ge=1)
    log_level: str | None = None
    sweep: dict[str, Any] = {}
    smooth: SmoothConfig | None = None
    oracle: OracleSection = OracleSection()
    bounds: BoundsSection = BoundsSection()

    model_config = {"extra": "forbid"}


class SelftestCheck(BaseModel):
    name: str
    ok: bool
    detail: str | None = None


class SelftestReport(BaseModel):
    """Named invariants, in the order they ran."""

    seed: int
    checks: list[SelftestCheck]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.ok]
