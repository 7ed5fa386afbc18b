"""Formula schemas: tail parameters, extremum profiles and identity reports."""

try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__
from fractions import Fraction

from pydantic import BaseModel, Field, model_validator

from fracmatch.schemas.common import RatioField


class TailParams(BaseModel):
    """(n, k, a) for one tail sum; the threshold ka/n is kept exact."""

    n: int = Field(ge=2)
    k: int = Field(ge=1)
    a: int = Field(ge=1)

    @model_validator(mode="after")
    def check_ranges(self) -> "TailParams":
        if self.k >= self.n:
            raise ValueError(f"need k < n, got n={self.n}, k={self.k}")
        if self.a > self.n - 1:
            raise ValueError(f"need a <= n-1, got n={self.n}, a={self.a}")
        return self

    @property
    def threshold(self) -> Fraction:
        return Fraction(self.k * self.a, self.n)


class ExtremumProfile(BaseModel):
    """Extremum of a per-argument table, with every argument attaining it."""

    value: int
    arg_list: list[int] = Field(alias="argList", min_length=1)
    table: dict[int, int] | None = None
    n_s: dict[int, int] | None = Field(None, alias="nS")

    model_config = {"populate_by_name": True}

    @model_validator(mode="after")
    def check_args(self) -> "ExtremumProfile":
        if self.table is not None:
            for arg in self.arg_list:
                if self.table.get(arg) != self.value:
                    raise ValueError(f"argument {arg} does not attain {self.value}")
        return self


class IdentityReport(BaseModel):
    """Outcome of one identity check at (n, k)."""

    name: str
    n: int
    k: int
    precondition_ok: bool = Field(alias="preconditionOk")
    evaluated: bool
    holds: bool | None = None
    lhs: int | None = None
    rhs: int | None = None
    extremizers: list[int] = []
    detail: str | None = None

    model_config = {"populate_by_name": True}


class ComplementReport(BaseModel):
    """p + q = C(n, k) check."""

    n: int
    k: int
    holds: bool
    p: int
    q: int
    total: int


class PeriodicityStatus(StrEnum):
    VACUOUS = "vacuous"
    HOLDS = "holds"
    FAILS = "fails"


class PeriodicityReport(BaseModel):
    """Shift (n, k) -> (n + k, k) of the extremal identity."""

    n: int
    k: int
    side: str = "q"
    status: PeriodicityStatus
    shifted_value: int | None = Field(None, alias="shiftedValue")
    shifted_target: int | None = Field(None, alias="shiftedTarget")

    model_config = {"populate_by_name": True}


class FormulaSummary(BaseModel):
    """Everything `eval` prints for one (n, k)."""

    n: int
    k: int
    threshold_example: RatioField | None = None
    p: ExtremumProfile
    q: ExtremumProfile
    p_ak: ExtremumProfile = Field(alias="pAk")
    binomial: int
    forms_agree: bool = Field(alias="formsAgree")

    model_config = {"populate_by_name": True}
