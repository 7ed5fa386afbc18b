"""Sweep schemas: configuration, per-(n,k) records, checkpoints and summaries."""

import hashlib
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__

from pydantic import BaseModel, Field, model_validator

from fracmatch.arith import DirectedBound
from fracmatch.schemas.common import canonical_json

CHECKPOINT_VERSION = 1


class KRule(StrEnum):
    QUARTER = "quarter"
    BAND = "band"
    EXPLICIT = "explicit"


class CellPath(StrEnum):
    CRUDE = "crude"
    REFINED = "refined"
    EXACT = "exact"


class SweepConfig(BaseModel):
    """One sweep over n in [n_min, n_max], every k selected by k_rule, every a in [1, n-1]."""

    n_min: int = Field(2, ge=2)
    n_max: int = Field(ge=2)
    k_rule: KRule = KRule.QUARTER
    k_list: list[int] = []
    workers: int = Field(1, ge=1)
    out_path: str = "sweep.jsonl"
    checkpoint_path: str = "sweep.checkpoint.json"
    filter_slack_bits: float = Field(32.0, gt=0)
    exact_only: bool = False
    resume: bool = False
    stop_after: int | None = Field(None, ge=1)
    progress: bool = False

    model_config = {"extra": "forbid"}

    @model_validator(mode="after")
    def check_rule(self) -> "SweepConfig":
        if self.n_max < self.n_min:
            raise ValueError(f"n_max={self.n_max} < n_min={self.n_min}")
        if self.k_rule is KRule.EXPLICIT and not self.k_list:
            raise ValueError("k_rule 'explicit' needs a non-empty k_list")
        return self

    def k_values(self, n: int) -> list[int]:
        """k values in scope for this n, ascending."""
        if self.k_rule is KRule.QUARTER:
            return list(range(1, n // 4 + 1))
        if self.k_rule is KRule.BAND:
            return [k for k in range(1, n) if 5 * k > n and 4 * k < n]
        return sorted({k for k in self.k_list if 1 <= k < n})

    def digest_fields(self) -> dict:
        """Fields that determine the ledger contents."""
        return {
            "n_min": self.n_min,
            "n_max": self.n_max,
            "k_rule": self.k_rule.value,
            "k_list": sorted(self.k_list),
            "filter_slack_bits": self.filter_slack_bits,
            "exact_only": self.exact_only,
        }

    def digest(self) -> str:
        """Hex SHA-256 of the canonical serialization of digest_fields."""
        return hashlib.sha256(canonical_json(self.digest_fields()).encode()).hexdigest()


class CellVerdict(BaseModel):
    """Verdict for tail_sum_strict(n,k,a) <= C(n-1,k)."""

    n: int
    k: int
    a: int
    ok: bool
    lhs: int | None = None
    rhs: int | None = None
    in_scope: bool = True
    path: CellPath = CellPath.EXACT
    lhs_log2: DirectedBound | None = None
    margin_log2: float | None = None

    @property
    def equality(self) -> bool:
        return self.lhs is not None and self.lhs == self.rhs


class SweepRecord(BaseModel):
    """One ledger line per (n, k)."""

    n: int
    k: int
    worst_a: int
    ok: bool
    margin_log2: float | None
    equality_as: list[int]
    exact_fallbacks: int


class ShardResult(BaseModel):
    """All records of one n, produced by one worker."""

    n: int
    records: list[SweepRecord]
    violations: list[tuple[int, int, int]] = []
    path_counts: dict[str, int] = {}
    out_of_scope: int = 0


class Checkpoint(BaseModel):
    """Persisted progress of a sweep."""

    version: int = CHECKPOINT_VERSION
    config_digest: str
    completed_n: list[int] = []
    violations: list[tuple[int, int, int]] = []


class SweepSummary(BaseModel):
    """What run_sweep reports."""

    cells: int = 0
    violations: list[tuple[int, int, int]] = []
    records_written: int = 0
    shards_completed: int = 0
    path_counts: dict[str, int] = {}
    interrupted: bool = False
    out_path: str | None = None


class FilterAudit(BaseModel):
    """Filtered versus exact verdicts on a sample of cells."""

    cells: int
    violations: int = 0
    disagreements: list[tuple[int, int, int]]
    path_counts: dict[str, int]
