"""Arithmetic substrate: exact counts, rationals and outward-rounded enclosures."""

from fractions import Fraction

from fracmatch.arith.binomial import BigCount, BinomialCache, binomial, get_binomial_cache
from fracmatch.arith.interval import (
    LN2,
    PI,
    SQRT_2PI,
    SQRT_PI,
    DirectedBound,
    log2_int_bounds,
    log2_ratio_bounds,
)
from fracmatch.arith.logbinom import (
    ln_factorial_bounds,
    log2_binomial_bounds,
    log2_term_bounds,
)

# Fractions are always reduced with a positive denominator.
Ratio = Fraction

__all__ = [
    "BigCount",
    "BinomialCache",
    "DirectedBound",
    "LN2",
    "PI",
    "Ratio",
    "SQRT_2PI",
    "SQRT_PI",
    "binomial",
    "get_binomial_cache",
    "ln_factorial_bounds",
    "log2_binomial_bounds",
    "log2_int_bounds",
    "log2_ratio_bounds",
    "log2_term_bounds",
]
