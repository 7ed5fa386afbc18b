"""Constant audit schemas: line items, reports and per-check results."""

try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__
from fractions import Fraction

from pydantic import BaseModel, Field

from fracmatch.arith import DirectedBound
from fracmatch.schemas.common import RatioField


class LineStatus(StrEnum):
    PASS = "pass"
    FAIL_AS_PRINTED = "fail_as_printed"
    BOUNDARY = "boundary"


class Relation(StrEnum):
    LT = "lt"
    LE = "le"
    GT = "gt"


class BEParams(BaseModel):
    """(n, k, a, delta) with sigma^2 = (ka/n)(1 - a/n)(1 - k/n)."""

    n: int
    k: int
    a: int
    delta: RatioField = Fraction(1, 20)
    sigma_sq: RatioField = Field(alias="sigmaSq")
    sigma: DirectedBound

    model_config = {"populate_by_name": True}


class HyperSigma(BaseModel):
    """exact: sigma^2 as a ratio; enclosure: sigma itself."""

    exact: RatioField
    enclosure: DirectedBound


class KIndices(BaseModel):
    k0: int = Field(alias="K0")
    k1: int = Field(alias="K1")
    k2: int = Field(alias="K2")

    model_config = {"populate_by_name": True}


class BEConstants(BaseModel):
    """I1, I2, I3 and their total at one (sigma, n, delta)."""

    i1: DirectedBound
    i2: DirectedBound
    i3: DirectedBound
    total: DirectedBound


class BoundLine(BaseModel):
    """One audited constant: computed enclosure against the printed value."""

    name: str
    computed: DirectedBound
    printed_value: str = Field(alias="printedValue")
    relation: Relation = Relation.LT
    status: LineStatus
    annotation: str | None = None

    model_config = {"populate_by_name": True}


class BoundReport(BaseModel):
    """Fixed-order audit table."""

    lines: list[BoundLine]

    def count(self, status: LineStatus) -> int:
        return sum(1 for line in self.lines if line.status is status)

    def line(self, name: str) -> BoundLine:
        for line in self.lines:
            if line.name == name:
                return line
        raise KeyError(name)


class SmallAThreshold(BaseModel):
    """Smallest a with 1.1203 (1/2 + 0.71/sqrt(a)) < 3/4."""

    a_star: int = Field(alias="aStar")
    printed_claim: int = Field(14, alias="printedClaim")
    status: LineStatus
    bound: DirectedBound

    model_config = {"populate_by_name": True}


class LowerSumCheck(BaseModel):
    """sum_{i < kb/n} C(b,i) C(n-b,k-i) <= (3/4) C(n,k), decided exactly."""

    n: int
    k: int
    b: int
    holds: bool
    ratio: float


class ChainCheck(BaseModel):
    """sum_{i < ka/n} C(a,i) C(n-a,k-i) <= 1.1203 (1/2 + 0.71/sqrt(a)) C(n,k)."""

    n: int
    k: int
    a: int
    lhs_ratio: DirectedBound = Field(alias="lhsRatio")
    rhs_ratio: DirectedBound = Field(alias="rhsRatio")
    holds: bool

    model_config = {"populate_by_name": True}


class LowerSumReport(BaseModel):
    checks: list[LowerSumCheck]
    chain: list[ChainCheck]

    def failures(self) -> list[LowerSumCheck]:
        return [c for c in self.checks if not c.holds]

    def failing_b(self) -> list[int]:
        return sorted({c.b for c in self.failures()})


class StirlingRatioCheck(BaseModel):
    """log2 of C(n-a,k-i)/C(n,k) against log2 of 1.1203 p^i (1-p)^(a-i), p = k/n."""

    n: int
    k: int
    a: int
    i: int
    excess_log2: DirectedBound = Field(alias="excessLog2")
    holds: bool

    model_config = {"populate_by_name": True}
