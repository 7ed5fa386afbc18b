"""Certified evaluation of the Berry-Esseen chain constants.

Every printed constant becomes a BoundLine whose status depends only on the
computed enclosure and the printed decimal. The formulas evaluated are the final
displayed ones; intermediate factors are kept as annotations.
"""

import math
from collections.abc import Iterable
from fractions import Fraction

from loguru import logger

from fracmatch.arith import (
    SQRT_2PI,
    SQRT_PI,
    DirectedBound,
    binomial,
    log2_binomial_bounds,
    log2_ratio_bounds,
)
from fracmatch.core.errors import PreconditionError
from fracmatch.schemas.bounds import (
    BEConstants,
    BEParams,
    BoundLine,
    BoundReport,
    ChainCheck,
    HyperSigma,
    KIndices,
    LineStatus,
    LowerSumCheck,
    LowerSumReport,
    Relation,
    SmallAThreshold,
    StirlingRatioCheck,
)
from fracmatch.services.sweep_service import term_run

DELTA = Fraction(1, 20)
SIGMA_MIN = 55
N_MIN = 120001
STIRLING_FACTOR = Fraction("1.1203")
BERNOULLI_CONSTANT = Fraction("0.71")
BE_BAND = (Fraction(1, 5), Fraction(1, 4))
X3_EXPONENT = Fraction(7, 100)
DEFAULT_LOWER_SUM_N = (100, 1000, 5000)

Number = int | Fraction


def classify(computed: DirectedBound, printed: str, relation: Relation) -> LineStatus:
    """pass / fail_as_printed / boundary from the enclosure alone."""
    v = Fraction(printed)
    if relation is Relation.LT:
        if computed.certainly_lt(v):
            return LineStatus.PASS
        if computed.certainly_gt(v):
            return LineStatus.FAIL_AS_PRINTED
    elif relation is Relation.LE:
        if computed.certainly_le(v):
            return LineStatus.PASS
        if computed.certainly_gt(v):
            return LineStatus.FAIL_AS_PRINTED
    else:
        if computed.certainly_gt(v):
            return LineStatus.PASS
        if computed.certainly_le(v):
            return LineStatus.FAIL_AS_PRINTED
    return LineStatus.BOUNDARY


def make_line(
    name: str,
    computed: DirectedBound,
    printed: str,
    relation: Relation = Relation.LT,
    annotation: str | None = None,
) -> BoundLine:
    return BoundLine(
        name=name,
        computed=computed,
        printed_value=printed,
        relation=relation,
        status=classify(computed, printed, relation),
        annotation=annotation,
    )


# Hypergeometric parameters


def hyper_sigma(n: int, k: int, a: int) -> HyperSigma:
    """sigma^2 = (ka/n)(1 - a/n)(1 - k/n) exactly, with an enclosure of sigma."""
    if not (1 <= k < n and 1 <= a <= n - 1):
        raise PreconditionError(f"need 1 <= k < n and 1 <= a <= n-1, got ({n}, {k}, {a})")
    exact = Fraction(k * a, n) * (1 - Fraction(a, n)) * (1 - Fraction(k, n))
    return HyperSigma(exact=exact, enclosure=DirectedBound.of(exact).sqrt())


def be_params(n: int, k: int, a: int, delta: Fraction = DELTA) -> BEParams:
    s = hyper_sigma(n, k, a)
    return BEParams(n=n, k=k, a=a, delta=delta, sigma_sq=s.exact, sigma=s.enclosure)


def k_indices(n: int, k: int, a: int, delta: Fraction = DELTA) -> KIndices:
    """K2 = ceil(ka/n - delta sigma^2), K1 = min{i >= 0: x(i) >= -1}, K0 = max{i: x(i) <= 0}.

    x(i) = (i - ka/n)/sigma; all comparisons are exact.
    """
    mu = Fraction(k * a, n)
    s2 = hyper_sigma(n, k, a).exact
    k2 = math.ceil(mu - Fraction(delta) * s2)
    k0 = math.floor(mu)
    i = max(0, math.floor(mu - math.sqrt(s2)) - 2)
    while not (i >= mu or (mu - i) ** 2 <= s2):
        i += 1
    return KIndices(k0=k0, k1=i, k2=k2)


# The three pieces of the Berry-Esseen bound


def be_constant_bounds(
    sigma_val: Number = SIGMA_MIN, n: int = N_MIN, delta: Number = DELTA
) -> BEConstants:
    """I1, I2, I3 from their final displayed forms, and the total."""
    s = DirectedBound.of(Fraction(sigma_val))
    s2 = s.square()
    d = DirectedBound.of(Fraction(delta))
    i1 = DirectedBound.of(Fraction(n, n - 1)) / (d.square() * s2)
    i2 = 60 / s2 * (1 / s2).exp() + 3 / s * (1 / s).exp()
    bracket = 1 / SQRT_PI + 1 + 10 / SQRT_2PI * (-(1 / (8 * s2))).exp()
    t = d * s - 1 / (2 * s)
    i3 = bracket / (12 * s2) + 1 / (SQRT_2PI * s) + (-(t.square() / 2)).exp() / (SQRT_2PI * t)
    return BEConstants(i1=i1, i2=i2, i3=i3, total=i1 + i2 + i3)


def x3_integral() -> DirectedBound:
    """Integral over the real line of |x|^3 exp(-0.07 x^2), equal to 1/0.07^2."""
    return DirectedBound.of(1 / X3_EXPONENT**2)


def x3_correction(sigma_val: Number = SIGMA_MIN) -> DirectedBound:
    """4 (3/(2*0.07))^(3/2) e^(-3/2) / sigma."""
    base = DirectedBound.of(Fraction(3) / (2 * X3_EXPONENT))
    return 4 * base * base.sqrt() * DirectedBound.of(Fraction(-3, 2)).exp() / Fraction(sigma_val)


def x3_integral_audit(sigma_val: Number = SIGMA_MIN) -> BoundLine:
    integral = x3_integral()
    correction = x3_correction(sigma_val)
    return make_line(
        "x3_integral",
        integral,
        "16",
        annotation=(
            f"correction {correction.mid:.4f} at sigma={sigma_val}; "
            f"integral plus correction {(integral + correction).mid:.4f}"
        ),
    )


# Stirling step


def stirling_exponent_lump(n_min: int = N_MIN, a_frac: Fraction = BE_BAND[0]) -> DirectedBound:
    """Upper bound of 1/(12n) + 1/(12(k-i)) + 1/(12(n-a-k+i)) over the regime.

    With n/5 < k < n/4, a <= a_frac n and i <= ka/n: k - i >= (n/5)(1 - a_frac)
    and n - a - k + i >= n(3/4 - a_frac).
    """
    n = Fraction(n_min)
    a_frac = Fraction(a_frac)
    value = (
        1 / (12 * n)
        + 1 / (12 * n * BE_BAND[0] * (1 - a_frac))
        + 1 / (12 * n * (1 - BE_BAND[1] - a_frac))
    )
    return DirectedBound.of(value)


def stirling_constant(n_min: int = N_MIN, a_frac: Fraction = BE_BAND[0]) -> DirectedBound:
    """(1 - a/n)^(-1/2) e^(1/1000) at a/n = a_frac."""
    lump = stirling_exponent_lump(n_min, a_frac)
    if not lump.certainly_le(Fraction(1, 1000)):
        logger.warning(f"Stirling exponent lump {lump} exceeds 1/1000 at n={n_min}")
    root = DirectedBound.of(1 - Fraction(a_frac)).sqrt()
    return DirectedBound.of(Fraction(1, 1000)).exp() / root


def _xlogx(q: Fraction) -> DirectedBound:
    if q == 0:
        return DirectedBound.point(0.0)
    b = DirectedBound.of(q)
    return b * b.log()


def _entropy(q: Fraction) -> DirectedBound:
    """Natural-log binary entropy."""
    return -(_xlogx(q) + _xlogx(1 - q))


def entropy_inequality(n: int, k: int, a: int, i: int) -> DirectedBound:
    """Enclosure of (n-a)H((k-i)/(n-a)) - nH(k/n) - [i ln(k/n) + (a-i) ln(1-k/n)].

    Nonpositive for i <= ka/n, zero at i = ka/n.
    """
    if not (1 <= k < n and 1 <= a < n and 0 <= i <= min(a, k) and k - i <= n - a):
        raise PreconditionError(f"invalid entropy arguments ({n}, {k}, {a}, {i})")
    p = Fraction(k, n)
    lhs = (n - a) * _entropy(Fraction(k - i, n - a)) - n * _entropy(p)
    rhs = i * DirectedBound.of(p).log() + (a - i) * DirectedBound.of(1 - p).log()
    return lhs - rhs


def entropy_grid() -> list[tuple[int, int, int, int]]:
    """Sample points with i at least one below ka/n."""
    points = []
    for n in (1000, N_MIN):
        for k in (n // 5 + 1, (n - 1) // 4):
            for a in (n // 20, n // 5):
                top = max(0, math.floor(Fraction(k * a, n)) - 1)
                for i in sorted({0, top // 2, top}):
                    points.append((n, k, a, i))
    return points


def default_ratio_samples() -> list[tuple[int, int, int, int]]:
    points = []
    for k in (N_MIN // 5 + 1, (N_MIN - 1) // 4):
        for a in (100, 1000, N_MIN // 5):
            points.append((N_MIN, k, a, 0))
            points.append((N_MIN, k, a, math.floor(Fraction(k * a, N_MIN))))
    return points


def stirling_ratio_spot_checks(
    samples: Iterable[tuple[int, int, int, int]] | None = None,
) -> list[StirlingRatioCheck]:
    """C(n-a,k-i)/C(n,k) <= 1.1203 p^i (1-p)^(a-i) in certified log2 arithmetic."""
    checks = []
    log2_factor = log2_ratio_bounds(STIRLING_FACTOR)
    for n, k, a, i in samples if samples is not None else default_ratio_samples():
        if not (0 <= i <= Fraction(k * a, n) and k - i <= n - a):
            raise PreconditionError(f"need i <= ka/n, got ({n}, {k}, {a}, {i})")
        p = Fraction(k, n)
        lhs = log2_binomial_bounds(n - a, k - i) - log2_binomial_bounds(n, k)
        rhs = log2_factor + i * log2_ratio_bounds(p) + (a - i) * log2_ratio_bounds(1 - p)
        excess = lhs - rhs
        checks.append(
            StirlingRatioCheck(n=n, k=k, a=a, i=i, excess_log2=excess, holds=excess.hi < 0)
        )
    return checks


# Bernoulli step


def _sqrt_fraction(v: Fraction) -> Fraction | None:
    num, den = math.isqrt(v.numerator), math.isqrt(v.denominator)
    if num * num == v.numerator and den * den == v.denominator:
        return Fraction(num, den)
    return None


def bernoulli_constant_at(p: Fraction) -> DirectedBound:
    """(rho + 0.43 s^3)/(3 s^3) with s^2 = p(1-p), rho = s^2(1 - 2 s^2).

    Equals (1 - 2v)/(3 sqrt v) + 0.43/3 with v = s^2.
    """
    p = Fraction(p)
    if not 0 < p < 1:
        raise PreconditionError(f"need 0 < p < 1, got {p}")
    v = p * (1 - p)
    third = Fraction(43, 300)
    root = _sqrt_fraction(v)
    if root is not None:
        return DirectedBound.of((1 - 2 * v) / (3 * root) + third)
    return DirectedBound.of(1 - 2 * v) / (3 * DirectedBound.of(v).sqrt()) + third


def bernoulli_constant_sup(band: tuple[Fraction, Fraction] = BE_BAND) -> DirectedBound:
    """Supremum over p in the open band; attained only in the limit p -> band[0].

    The constant decreases in v = p(1-p), and v increases on (0, 1/2).
    """
    lo, hi = Fraction(band[0]), Fraction(band[1])
    if not 0 < lo < hi <= Fraction(1, 2):
        raise PreconditionError(f"band must lie in (0, 1/2], got ({lo}, {hi})")
    return bernoulli_constant_at(lo)


def bernoulli_tail_gap(a: int, p: Fraction) -> Fraction:
    """|P(Bin(a, p) < pa) - 1/2|, exactly."""
    p = Fraction(p)
    if a < 1 or not 0 < p < 1:
        raise PreconditionError(f"need a >= 1 and 0 < p < 1, got a={a}, p={p}")
    top = math.ceil(p * a) - 1
    p0 = sum(
        (math.comb(a, i) * p**i * (1 - p) ** (a - i) for i in range(0, top + 1)), Fraction(0)
    )
    return abs(p0 - Fraction(1, 2))


def bernoulli_gap_within(a: int, p: Fraction) -> bool:
    """bernoulli_tail_gap(a, p) < 0.71/sqrt(a), compared exactly after squaring."""
    gap = bernoulli_tail_gap(a, p)
    return gap * gap * a < BERNOULLI_CONSTANT**2


def _small_a_cut() -> Fraction:
    # 1.1203 (1/2 + 0.71/sqrt(a)) < 3/4  <=>  a > (0.71 c / R)^2, R = (3 - 2c)/4
    c = STIRLING_FACTOR
    r = (3 - 2 * c) / 4
    return (BERNOULLI_CONSTANT * c / r) ** 2


def small_a_holds(a: int) -> bool:
    """Whether 1.1203 (1/2 + 0.71/sqrt(a)) < 3/4 at this a."""
    return a > _small_a_cut()


def small_a_threshold() -> SmallAThreshold:
    """Smallest a satisfying the printed inequality, against the printed a > 14."""
    cut = _small_a_cut()
    a_star = math.floor(cut) + 1
    status = LineStatus.PASS if a_star <= 15 else LineStatus.FAIL_AS_PRINTED
    return SmallAThreshold(a_star=a_star, status=status, bound=DirectedBound.of(cut))


# Lower sums and the empirical gap


def _band(n: int) -> list[int]:
    return [k for k in range(1, n) if 5 * k > n and 4 * k < n]


def _lower_strict(n: int, k: int, a: int) -> int:
    return sum(term_run(n, k, a, 0, math.ceil(Fraction(k * a, n)) - 1), start=0)


def lower_sum_checks(
    n_list: Iterable[int] = DEFAULT_LOWER_SUM_N,
    b_max: int = 8,
    chain_samples: Iterable[tuple[int, int, int]] | None = None,
) -> LowerSumReport:
    """Exact b <= b_max checks against (3/4) C(n,k) for every k in (n/5, n/4).

    Also checks the full chain bound at sampled large (n, k, a).
    """
    n_list = list(n_list)
    checks = []
    for n in n_list:
        for k in _band(n):
            total = binomial(n, k)
            for b in range(0, b_max + 1):
                lhs = _lower_strict(n, k, b) if b else 0
                checks.append(
                    LowerSumCheck(
                        n=n, k=k, b=b, holds=4 * lhs <= 3 * total, ratio=float(Fraction(lhs, total))
                    )
                )

    if chain_samples is None:
        chain_samples = []
        for n in n_list:
            if n >= 1000:
                ks = _band(n)
                k = ks[len(ks) // 2]
                chain_samples.extend((n, k, a) for a in (18, 50, n // 5))
    chain = []
    for n, k, a in chain_samples:
        lhs = DirectedBound.of(Fraction(_lower_strict(n, k, a), binomial(n, k)))
        rhs = (Fraction(1, 2) + BERNOULLI_CONSTANT / DirectedBound.of(a).sqrt()) * STIRLING_FACTOR
        chain.append(
            ChainCheck(n=n, k=k, a=a, lhs_ratio=lhs, rhs_ratio=rhs, holds=lhs.certainly_le(rhs))
        )

    report = LowerSumReport(checks=checks, chain=chain)
    failing = report.failing_b()
    if failing:
        logger.warning(f"lower-sum target (3/4) C(n,k) fails for b in {failing}")
    return report


def be_empirical_gap(n: int, k: int, a: int) -> DirectedBound:
    """|P(i <= ka/n) - 1/2| for the hypergeometric law, from an exact sum."""
    if not (1 <= k < n and 1 <= a <= n - 1):
        raise PreconditionError(f"need 1 <= k < n and 1 <= a <= n-1, got ({n}, {k}, {a})")
    lower = sum(term_run(n, k, a, 0, math.floor(Fraction(k * a, n))), start=0)
    gap = abs(Fraction(lower, binomial(n, k)) - Fraction(1, 2))
    return DirectedBound.of(gap)


# Report


def _sigma_regime(n: int = N_MIN) -> DirectedBound:
    ks = _band(n)
    corners = [
        hyper_sigma(n, k, a)
        for k in (ks[0], ks[-1])
        for a in (math.ceil(Fraction(n, 5)), math.floor(n - Fraction(n, 5)))
    ]
    return min(corners, key=lambda s: s.exact).enclosure


def _max_hi(bounds: Iterable[DirectedBound]) -> DirectedBound:
    return max(bounds, key=lambda b: b.hi)


def build_report(
    sigma_val: Number = SIGMA_MIN, n: int = N_MIN, delta: Number = DELTA
) -> BoundReport:
    """Every audited constant, in fixed order."""
    be = be_constant_bounds(sigma_val, n, delta)
    small_a = small_a_threshold()
    ratio_checks = stirling_ratio_spot_checks()
    lines = [
        make_line("sigma_regime", _sigma_regime(n), str(SIGMA_MIN), Relation.GT,
                  "minimum sigma over corners a in [n/5, n - n/5], k in (n/5, n/4)"),
        make_line("i1", be.i1, "0.1323"),
        make_line("i2", be.i2, "0.077"),
        make_line("i3", be.i3, "0.011"),
        make_line("be_total", be.total, "0.2203"),
        make_line("be_gap_quarter", be.total, "0.25"),
        make_line("i2_lattice_constant", DirectedBound.of(17 * 16) / (3 * SQRT_2PI), "60"),
        make_line("i2_bulk_constant", DirectedBound.of(85) / (12 * SQRT_2PI), "3"),
        x3_integral_audit(sigma_val),
        make_line("stirling_exponent_lump", stirling_exponent_lump(n), "0.001", Relation.LE),
        make_line("stirling_constant", stirling_constant(n), "1.1203", Relation.LE),
        make_line(
            "stirling_ratio_spot_checks",
            _max_hi(c.excess_log2 for c in ratio_checks),
            "0",
            annotation=f"max log2 excess over {len(ratio_checks)} samples",
        ),
        make_line(
            "entropy_inequality",
            _max_hi(entropy_inequality(*p) for p in entropy_grid()),
            "0",
            Relation.LE,
            annotation="max of LHS - RHS over samples with i < ka/n",
        ),
        make_line(
            "bernoulli_constant_sup",
            bernoulli_constant_sup(),
            "0.71",
            annotation="equals 71/100 at p = 1/5, not attained on the open band; "
            "printed floor sigma_1^2 >= 5/25 exceeds the band infimum 4/25; "
            "factor 1.026 in the final display not used",
        ),
        make_line(
            "small_a_threshold",
            small_a.bound,
            str(small_a.printed_claim),
            Relation.LE,
            annotation=f"inequality first holds at a = {small_a.a_star}",
        ),
    ]
    report = BoundReport(lines=lines)
    logger.info(
        f"Bounds report: {report.count(LineStatus.PASS)} pass, "
        f"{report.count(LineStatus.FAIL_AS_PRINTED)} fail_as_printed, "
        f"{report.count(LineStatus.BOUNDARY)} boundary"
    )
    return report


def format_report(report: BoundReport) -> str:
    """Plain-text table: name, computed lo/hi, printed value, status."""
    header = f"{'name':<28} {'lo':>22} {'hi':>22} {'printed':>8}  status"
    rows = [header, "-" * len(header)]
    for line in report.lines:
        rows.append(
            f"{line.name:<28} {line.computed.lo:>22.15g} {line.computed.hi:>22.15g} "
            f"{line.printed_value:>8}  {line.status.value}"
        )
        if line.annotation:
            rows.append(f"{'':<28}   {line.annotation}")
    return "\n".join(rows)
