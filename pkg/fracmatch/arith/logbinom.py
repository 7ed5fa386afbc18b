"""Certified enclosures of log-binomials.

ln m! for m >= 32 comes from the Stirling series truncated after the m^-3 term,
whose remainder lies in (0, 1/(1260 m^5)). Smaller factorials are exact.
"""

import math
from fractions import Fraction

from fracmatch.arith.interval import LN2, PI, DirectedBound, log2_int_bounds

_EXACT_FACTORIAL_BELOW = 32


def ln_factorial_bounds(m: int) -> DirectedBound:
    """Enclosure of ln(m!)."""
    if m < 0:
        raise ValueError(f"factorial of negative {m}")
    if m < _EXACT_FACTORIAL_BELOW:
        if m < 2:
            return DirectedBound.point(0.0)
        return log2_int_bounds(math.factorial(m)) * LN2
    M = DirectedBound.of(m)
    series = (
        M * M.log()
        - M
        + (PI * 2 * M).log() * 0.5
        + DirectedBound.of(Fraction(1, 12 * m))
        - DirectedBound.of(Fraction(1, 360 * m**3))
    )
    remainder = DirectedBound(0.0, DirectedBound.of(Fraction(1, 1260 * m**5)).hi)
    return series + remainder


def log2_binomial_bounds(n: int, k: int) -> DirectedBound:
    """Enclosure of log2 C(n, k) for 0 <= k <= n."""
    if not 0 <= k <= n:
        raise ValueError(f"log2_binomial_bounds needs 0 <= k <= n, got n={n}, k={k}")
    j = min(k, n - k)
    if j == 0:
        return DirectedBound.point(0.0)
    if n < _EXACT_FACTORIAL_BELOW:
        return log2_int_bounds(math.comb(n, j))
    ln_c = ln_factorial_bounds(n) - ln_factorial_bounds(j) - ln_factorial_bounds(n - j)
    bound = ln_c / LN2
    # C(n, j) >= 1
    return DirectedBound(max(bound.lo, 0.0), bound.hi)


def log2_term_bounds(n: int, k: int, a: int, i: int) -> DirectedBound:
    """Enclosure of log2 [C(a, i) C(n - a, k - i)] for a nonzero term."""
    return log2_binomial_bounds(a, i) + log2_binomial_bounds(n - a, k - i)
