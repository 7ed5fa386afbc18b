"""Outward-rounded real enclosures (DirectedBound).

Every operation rounds the lower end toward -inf and the upper end toward +inf
with ``math.nextafter``. Basic operations (+, -, *, /, sqrt) are correctly
rounded in IEEE double, so one ulp of widening suffices. ``exp`` and ``log`` come
from libm, which is accurate to within one ulp; they are widened by two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from fracmatch.core.errors import ArithmeticFailure

Number = int | float | Fraction

_INF = math.inf
_LIBM_ULPS = 2


def _down(x: float, ulps: int = 1) -> float:
    for _ in range(ulps):
        x = math.nextafter(x, -_INF)
    return x


def _up(x: float, ulps: int = 1) -> float:
    for _ in range(ulps):
        x = math.nextafter(x, _INF)
    return x


@dataclass(frozen=True, slots=True)
class DirectedBound:
    """Certified enclosure [lo, hi] of a real number."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ArithmeticFailure(f"non-finite enclosure [{self.lo}, {self.hi}]")
        if self.lo > self.hi:
            raise ArithmeticFailure(f"inverted enclosure [{self.lo}, {self.hi}]")

    # Constructors

    @classmethod
    def point(cls, x: float) -> DirectedBound:
        """Enclosure of a float that is exactly representable."""
        return cls(x, x)

    @classmethod
    def of(cls, x: Number | DirectedBound) -> DirectedBound:
        """Enclosure of an exact int, float or Fraction."""
        if isinstance(x, DirectedBound):
            return x
        if isinstance(x, float):
            return cls(x, x)
        if isinstance(x, int):
            return cls._of_fraction(Fraction(x))
        if isinstance(x, Fraction):
            return cls._of_fraction(x)
        raise TypeError(f"cannot enclose {type(x).__name__}")

    @classmethod
    def _of_fraction(cls, r: Fraction) -> DirectedBound:
        f = float(r)  # correctly rounded
        if Fraction(f) == r:
            return cls(f, f)
        return cls(_down(f), _up(f))

    # Queries

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: Number) -> bool:
        """Whether the exact value x lies in the enclosure."""
        r = Fraction(x)
        return Fraction(self.lo) <= r <= Fraction(self.hi)

    def certainly_lt(self, other: Number | DirectedBound) -> bool:
        return self.hi < DirectedBound.of(other).lo

    def certainly_le(self, other: Number | DirectedBound) -> bool:
        return self.hi <= DirectedBound.of(other).lo

    def certainly_gt(self, other: Number | DirectedBound) -> bool:
        return self.lo > DirectedBound.of(other).hi

    def relative_width(self) -> float:
        """Width relative to max(1, |value|)."""
        return self.width / max(1.0, abs(self.lo), abs(self.hi))

    # Arithmetic

    def __neg__(self) -> DirectedBound:
        return DirectedBound(-self.hi, -self.lo)

    def __add__(self, other: Number | DirectedBound) -> DirectedBound:
        o = DirectedBound.of(other)
        return DirectedBound(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __sub__(self, other: Number | DirectedBound) -> DirectedBound:
        o = DirectedBound.of(other)
        return DirectedBound(_down(self.lo - o.hi), _up(self.hi - o.lo))

    def __rsub__(self, other: Number | DirectedBound) -> DirectedBound:
        return DirectedBound.of(other) - self

    def __mul__(self, other: Number | DirectedBound) -> DirectedBound:
        o = DirectedBound.of(other)
        products = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return DirectedBound(_down(min(products)), _up(max(products)))

    __rmul__ = __mul__

    def __truediv__(self, other: Number | DirectedBound) -> DirectedBound:
        o = DirectedBound.of(other)
        if o.lo <= 0.0 <= o.hi:
            raise ArithmeticFailure(f"division by enclosure containing zero: {o}")
        quotients = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        return DirectedBound(_down(min(quotients)), _up(max(quotients)))

    def __rtruediv__(self, other: Number | DirectedBound) -> DirectedBound:
        return DirectedBound.of(other) / self

    def square(self) -> DirectedBound:
        if self.lo >= 0.0:
            return DirectedBound(_down(self.lo * self.lo), _up(self.hi * self.hi))
        if self.hi <= 0.0:
            return DirectedBound(_down(self.hi * self.hi), _up(self.lo * self.lo))
        return DirectedBound(0.0, _up(max(self.lo * self.lo, self.hi * self.hi)))

    def sqrt(self) -> DirectedBound:
        if self.hi < 0.0:
            raise ArithmeticFailure(f"sqrt of negative enclosure {self}")
        lo = max(0.0, _down(math.sqrt(max(self.lo, 0.0))))
        return DirectedBound(lo, _up(math.sqrt(self.hi)))

    def exp(self) -> DirectedBound:
        lo = max(0.0, _down(math.exp(self.lo), _LIBM_ULPS))
        return DirectedBound(lo, _up(math.exp(self.hi), _LIBM_ULPS))

    def log(self) -> DirectedBound:
        if self.lo <= 0.0:
            raise ArithmeticFailure(f"log of non-positive enclosure {self}")
        return DirectedBound(
            _down(math.log(self.lo), _LIBM_ULPS), _up(math.log(self.hi), _LIBM_ULPS)
        )

    def log2(self) -> DirectedBound:
        if self.lo <= 0.0:
            raise ArithmeticFailure(f"log2 of non-positive enclosure {self}")
        return DirectedBound(
            _down(math.log2(self.lo), _LIBM_ULPS), _up(math.log2(self.hi), _LIBM_ULPS)
        )

    def __repr__(self) -> str:
        return f"DirectedBound({self.lo!r}, {self.hi!r})"


def _constant(value: float) -> DirectedBound:
    # value is the double nearest an irrational constant
    return DirectedBound(_down(value), _up(value))


PI = _constant(math.pi)
LN2 = _constant(math.log(2.0))
SQRT_2PI = (PI * 2).sqrt()
SQRT_PI = PI.sqrt()


def log2_int_bounds(x: int) -> DirectedBound:
    """Enclosure of log2(x) for a positive integer of any size."""
    if x <= 0:
        raise ArithmeticFailure(f"log2 of non-positive integer {x}")
    shift = max(0, x.bit_length() - 53)
    m = x >> shift  # x lies in [m * 2^shift, (m + 1) * 2^shift)
    lo = math.log2(m)
    hi = lo if shift == 0 else math.log2(m + 1)
    return DirectedBound(
        _down(lo + shift, _LIBM_ULPS + 1), _up(hi + shift, _LIBM_ULPS + 1)
    )


def log2_ratio_bounds(r: Fraction) -> DirectedBound:
    """Enclosure of log2(r) for a positive rational."""
    if r <= 0:
        raise ArithmeticFailure(f"log2 of non-positive rational {r}")
    return log2_int_bounds(r.numerator) - log2_int_bounds(r.denominator)
