"""Cell verification for the finite sweep: tail_sum_strict(n,k,a) <= C(n-1,k).

Three paths decide a cell:

- crude: (#terms) x (largest term) in enclosure arithmetic;
- refined: terms summed relative to the largest one until they fall below
  2^-slack of the running sum, the rest bounded by a geometric majorant;
- exact: big-integer summation by the term recurrence.

The hypergeometric terms are log-concave in i, so consecutive ratios are
nonincreasing; both majorants rely on that.
"""

import math
import random
from collections import Counter
from fractions import Fraction

from loguru import logger

from fracmatch.arith import (
    BigCount,
    BinomialCache,
    DirectedBound,
    binomial,
    log2_binomial_bounds,
    log2_int_bounds,
    log2_term_bounds,
)
from fracmatch.core.errors import ArithmeticFailure, PreconditionError
from fracmatch.schemas.sweep import CellPath, CellVerdict, FilterAudit, ShardResult, SweepRecord
from fracmatch.services.formula_service import i_min_strict

MAX_REFINED_TERMS = 4096
_MARGIN_DIGITS = 10**9


def _check_cell(n: int, k: int, a: int) -> bool:
    if not (1 <= k < n and 1 <= a <= n - 1):
        raise PreconditionError(f"need 1 <= k < n and 1 <= a <= n-1, got ({n}, {k}, {a})")
    in_scope = 4 * k <= n
    if not in_scope:
        logger.warning(f"cell ({n}, {k}, {a}) has k > n/4, outside the finite-check scope")
    return in_scope


def tail_range(n: int, k: int, a: int) -> tuple[int, int]:
    """Index range [lo, hi] of nonzero strict-tail terms; empty when lo > hi."""
    return max(i_min_strict(n, k, a), k - (n - a), 0), min(a, k)


def _ratio_num_den(n: int, k: int, a: int, i: int) -> tuple[int, int]:
    # term(i+1) / term(i)
    return (a - i) * (k - i), (i + 1) * (n - a - k + i + 1)


def tail_terms(
    n: int, k: int, a: int, cache: BinomialCache | None = None
) -> list[BigCount]:
    """Nonzero strict-tail terms C(a,i)C(n-a,k-i) in increasing i, via the recurrence."""
    lo, hi = tail_range(n, k, a)
    return term_run(n, k, a, lo, hi, cache)


def term_run(
    n: int, k: int, a: int, lo: int, hi: int, cache: BinomialCache | None = None
) -> list[BigCount]:
    """Terms C(a,i)C(n-a,k-i) for i in [lo, hi], clipped to the nonzero range."""
    lo, hi = max(lo, k - (n - a), 0), min(hi, a, k)
    if lo > hi:
        return []
    term = binomial(a, lo, cache) * binomial(n - a, k - lo, cache)
    terms = [term]
    for i in range(lo, hi):
        num, den = _ratio_num_den(n, k, a, i)
        term, rem = divmod(term * num, den)
        if rem:
            raise ArithmeticFailure(f"term recurrence left remainder at ({n}, {k}, {a}, {i})")
        terms.append(term)
    return terms


def _floor_margin(x: float) -> float:
    return math.floor(x * _MARGIN_DIGITS) / _MARGIN_DIGITS


def _exact_margin(lhs: BigCount, rhs: BigCount) -> float | None:
    if lhs == 0:
        return None
    if lhs == rhs:
        return 0.0
    lo = (log2_int_bounds(rhs) - log2_int_bounds(lhs)).lo
    # the sign of log2(rhs/lhs) is known exactly
    lo = max(lo, 0.0) if lhs < rhs else min(lo, 0.0)
    return _floor_margin(lo)


def verify_cell(n: int, k: int, a: int, cache: BinomialCache | None = None) -> CellVerdict:
    """Exact big-integer comparison of the strict tail against C(n-1, k)."""
    in_scope = _check_cell(n, k, a)
    lhs = sum(tail_terms(n, k, a, cache), start=0)
    rhs = binomial(n - 1, k, cache)
    return CellVerdict(
        n=n,
        k=k,
        a=a,
        ok=lhs <= rhs,
        lhs=lhs,
        rhs=rhs,
        in_scope=in_scope,
        path=CellPath.EXACT,
        margin_log2=_exact_margin(lhs, rhs),
    )


def _peak(n: int, k: int, a: int, lo: int, hi: int) -> int:
    """Index of the largest term in [lo, hi]."""
    mode = (a + 1) * (k + 1) // (n + 2)
    i = min(max(lo, mode), hi)
    while i < hi:
        num, den = _ratio_num_den(n, k, a, i)
        if num <= den:
            break
        i += 1
    while i > lo:
        num, den = _ratio_num_den(n, k, a, i - 1)
        if num >= den:
            break
        i -= 1
    return i


def _relative_run(ratios, count: int, slack: float) -> DirectedBound:
    """Sum of r_1 + r_2 + ... where r_j = rho_1 ... rho_j and rho_j is nonincreasing.

    ``ratios`` yields exact ratios; ``count`` terms exist in total.
    """
    total = DirectedBound.point(0.0)
    r = DirectedBound.point(1.0)
    threshold = 2.0**-slack
    for j, rho in enumerate(ratios, start=1):
        rho_b = DirectedBound.of(rho)
        r = r * rho_b
        total = total + r
        remaining = count - j
        if remaining == 0:
            return total
        small = r.hi < threshold * max(total.lo, 1.0)
        if small or j >= MAX_REFINED_TERMS:
            # remaining terms each <= r, and geometric with ratio <= rho when rho < 1
            by_count = r * remaining
            if rho < 1:
                by_geometric = r * rho_b / (1 - rho_b)
                tail_hi = min(by_count.hi, by_geometric.hi)
            else:
                tail_hi = by_count.hi
            return DirectedBound(total.lo, (total + DirectedBound(0.0, tail_hi)).hi)
    return total


def _forward_ratios(n: int, k: int, a: int, start: int, stop: int):
    for i in range(start, stop):
        num, den = _ratio_num_den(n, k, a, i)
        yield Fraction(num, den)


def _backward_ratios(n: int, k: int, a: int, start: int, stop: int):
    # term(i-1) / term(i) for i = start, start-1, ..., stop+1
    for i in range(start, stop, -1):
        num, den = _ratio_num_den(n, k, a, i - 1)
        yield Fraction(den, num)


def _refined_log2(
    n: int, k: int, a: int, lo: int, hi: int, peak: int, peak_log2: DirectedBound, slack: float
) -> DirectedBound:
    forward = _relative_run(_forward_ratios(n, k, a, peak, hi), hi - peak, slack)
    backward = _relative_run(_backward_ratios(n, k, a, peak, lo), peak - lo, slack)
    relative = forward + backward + 1
    return peak_log2 + relative.log2()


def verify_cell_filtered(
    n: int,
    k: int,
    a: int,
    slack_bits: float = 32.0,
    cache: BinomialCache | None = None,
    rhs_log2: DirectedBound | None = None,
) -> CellVerdict:
    """Same verdict as verify_cell; exact arithmetic only when enclosures cannot decide.

    The filter answers ok only when a certified upper bound of log2(lhs) lies below a
    certified lower bound of log2(rhs); every other cell falls through to exact.
    """
    in_scope = _check_cell(n, k, a)
    lo, hi = tail_range(n, k, a)
    if lo > hi:
        return CellVerdict(n=n, k=k, a=a, ok=True, lhs=0, in_scope=in_scope, path=CellPath.CRUDE)
    if rhs_log2 is None:
        rhs_log2 = log2_binomial_bounds(n - 1, k)

    peak = _peak(n, k, a, lo, hi)
    peak_log2 = log2_term_bounds(n, k, a, peak)
    crude = peak_log2 + log2_int_bounds(hi - lo + 1)
    if crude.certainly_lt(rhs_log2):
        return CellVerdict(
            n=n, k=k, a=a, ok=True, in_scope=in_scope, path=CellPath.CRUDE, lhs_log2=crude,
            margin_log2=_floor_margin(rhs_log2.lo - crude.hi),
        )

    refined = _refined_log2(n, k, a, lo, hi, peak, peak_log2, slack_bits)
    if refined.certainly_lt(rhs_log2):
        return CellVerdict(
            n=n, k=k, a=a, ok=True, in_scope=in_scope, path=CellPath.REFINED,
            lhs_log2=refined, margin_log2=_floor_margin(rhs_log2.lo - refined.hi),
        )

    logger.debug(f"cell ({n}, {k}, {a}) falls back to exact arithmetic")
    verdict = verify_cell(n, k, a, cache)
    return verdict.model_copy(update={"lhs_log2": refined})


def sweep_row(
    n: int,
    ks: list[int],
    slack_bits: float = 32.0,
    exact_only: bool = False,
) -> ShardResult:
    """Every (k, a) of one n; the shard unit of the sweep.

    Top-level so that process pools can pickle it. Each worker process uses its
    own binomial cache.
    """
    records: list[SweepRecord] = []
    violations: list[tuple[int, int, int]] = []
    paths: Counter[str] = Counter()
    out_of_scope = 0
    for k in ks:
        rhs_log2 = None if exact_only else log2_binomial_bounds(n - 1, k)
        worst_a = 1
        worst_margin: float | None = None
        equality_as: list[int] = []
        fallbacks = 0
        ok = True
        for a in range(1, n):
            if exact_only:
                cell = verify_cell(n, k, a)
            else:
                cell = verify_cell_filtered(n, k, a, slack_bits, rhs_log2=rhs_log2)
            paths[cell.path.value] += 1
            if cell.path is CellPath.EXACT:
                fallbacks += 1
            if not cell.in_scope:
                out_of_scope += 1
            if not cell.ok:
                ok = False
                violations.append((n, k, a))
                logger.error(f"violation at ({n}, {k}, {a}): {cell.lhs} > {cell.rhs}")
            if cell.equality:
                equality_as.append(a)
            m = cell.margin_log2
            if m is not None and (worst_margin is None or m < worst_margin):
                worst_margin, worst_a = m, a
        records.append(
            SweepRecord(
                n=n,
                k=k,
                worst_a=worst_a,
                ok=ok,
                margin_log2=worst_margin,
                equality_as=equality_as,
                exact_fallbacks=fallbacks,
            )
        )
    return ShardResult(
        n=n,
        records=records,
        violations=violations,
        path_counts=dict(paths),
        out_of_scope=out_of_scope,
    )


def random_cells(
    count: int, n_max: int, seed: int = 0, n_min: int = 4, full_range: bool = False
) -> list[tuple[int, int, int]]:
    """Deterministic sample of cells; in-scope (k <= n/4) unless ``full_range``.

    The full range includes k > n/4, where violating cells exist.
    """
    rng = random.Random(seed)
    cells = []
    for _ in range(count):
        n = rng.randint(max(n_min, 4), n_max)
        k = rng.randint(1, n - 1 if full_range else n // 4)
        a = rng.randint(1, n - 1)
        cells.append((n, k, a))
    return cells


def audit_filter(
    cells: list[tuple[int, int, int]], slack_bits: float = 32.0
) -> FilterAudit:
    """Compare filtered verdicts with exact verdicts cell by cell."""
    disagreements = []
    violations = 0
    paths: Counter[str] = Counter()
    for n, k, a in cells:
        filtered = verify_cell_filtered(n, k, a, slack_bits)
        exact = verify_cell(n, k, a)
        paths[filtered.path.value] += 1
        if not exact.ok:
            violations += 1
        if filtered.ok != exact.ok:
            disagreements.append((n, k, a))
            logger.error(f"filter disagrees with exact arithmetic at ({n}, {k}, {a})")
    logger.info(
        f"filter audit: {len(cells)} cells, {violations} violating, "
        f"{len(disagreements)} disagreements"
    )
    return FilterAudit(
        cells=len(cells),
        violations=violations,
        disagreements=disagreements,
        path_counts=dict(paths),
    )
