"""Conjectured extremal formulas for p(n,k), q(n,k) and their identities."""

import math
from collections.abc import Callable, Iterator
from fractions import Fraction

from loguru import logger

from fracmatch.arith import BigCount, BinomialCache, binomial
from fracmatch.core.errors import PreconditionError
from fracmatch.schemas.formula import (
    ComplementReport,
    ExtremumProfile,
    FormulaSummary,
    IdentityReport,
    PeriodicityReport,
    PeriodicityStatus,
)


def i_min_strict(n: int, k: int, a: int) -> int:
    """Smallest i with i > ka/n."""
    return math.floor(Fraction(k * a, n)) + 1


def i_min_weak(n: int, k: int, a: int) -> int:
    """Smallest i with i >= ka/n."""
    return math.ceil(Fraction(k * a, n))


def _check_nk(n: int, k: int) -> None:
    if not 1 <= k < n:
        raise PreconditionError(f"need 1 <= k < n, got n={n}, k={k}")


def _check_nka(n: int, k: int, a: int) -> None:
    _check_nk(n, k)
    if not 1 <= a <= n - 1:
        raise PreconditionError(f"need 1 <= a <= n-1, got n={n}, a={a}")


def _tail_from(n: int, k: int, a: int, start: int, cache: BinomialCache | None) -> BigCount:
    lo = max(start, k - (n - a), 0)
    hi = min(a, k)
    return sum(
        (binomial(a, i, cache) * binomial(n - a, k - i, cache) for i in range(lo, hi + 1)),
        start=0,
    )


def tail_sum_strict(n: int, k: int, a: int, cache: BinomialCache | None = None) -> BigCount:
    """Sum over i > ka/n of C(a, i) C(n - a, k - i)."""
    _check_nka(n, k, a)
    return _tail_from(n, k, a, i_min_strict(n, k, a), cache)


def tail_sum_weak(n: int, k: int, a: int, cache: BinomialCache | None = None) -> BigCount:
    """Sum over i >= ka/n of C(a, i) C(n - a, k - i)."""
    _check_nka(n, k, a)
    return _tail_from(n, k, a, i_min_weak(n, k, a), cache)


def lower_sum_weak(n: int, k: int, a: int, cache: BinomialCache | None = None) -> BigCount:
    """Sum over i <= ka/n; complements tail_sum_strict to C(n, k)."""
    _check_nka(n, k, a)
    top = min(i_min_strict(n, k, a) - 1, a, k)
    lo = max(0, k - (n - a))
    return sum(
        (binomial(a, i, cache) * binomial(n - a, k - i, cache) for i in range(lo, top + 1)),
        start=0,
    )


def _profile(
    args: range, evaluate: Callable[[int], BigCount], better: Callable[[int, int], bool]
) -> ExtremumProfile:
    table = {arg: evaluate(arg) for arg in args}
    best: int | None = None
    for value in table.values():
        if best is None or better(value, best):
            best = value
    assert best is not None
    return ExtremumProfile(
        value=best,
        arg_list=[arg for arg, value in table.items() if value == best],
        table=table,
    )


def p_conjectured(n: int, k: int, cache: BinomialCache | None = None) -> ExtremumProfile:
    """Maximum over a of tail_sum_strict, with every maximizer."""
    _check_nk(n, k)
    return _profile(
        range(1, n), lambda a: tail_sum_strict(n, k, a, cache), lambda x, y: x > y
    )


def q_conjectured(n: int, k: int, cache: BinomialCache | None = None) -> ExtremumProfile:
    """Minimum over a of tail_sum_weak, with every minimizer."""
    _check_nk(n, k)
    return _profile(
        range(1, n), lambda a: tail_sum_weak(n, k, a, cache), lambda x, y: x < y
    )


def n_s(n: int, k: int, s: int) -> int:
    """ceil(ns/k) - 1."""
    return math.ceil(Fraction(n * s, k)) - 1


def _ak_term(n: int, k: int, s: int, cache: BinomialCache | None) -> BigCount:
    ns = n_s(n, k, s)
    return sum(
        (binomial(ns, i + s, cache) * binomial(n - ns, k - s - i, cache) for i in range(k - s + 1)),
        start=0,
    )


def p_ak_profile(n: int, k: int, cache: BinomialCache | None = None) -> ExtremumProfile:
    """The s-indexed form of the conjectured p(n, k), with every maximizing s."""
    _check_nk(n, k)
    profile = _profile(range(1, k + 1), lambda s: _ak_term(n, k, s, cache), lambda x, y: x > y)
    profile.n_s = {s: n_s(n, k, s) for s in range(1, k + 1)}
    return profile


def p_ak_form(n: int, k: int, cache: BinomialCache | None = None) -> BigCount:
    """Maximum over s in [1, k] of the s-indexed sum."""
    return p_ak_profile(n, k, cache).value


def summarize(n: int, k: int, cache: BinomialCache | None = None) -> FormulaSummary:
    """Both conjectured values and both forms of p for one (n, k)."""
    p = p_conjectured(n, k, cache)
    p_ak = p_ak_profile(n, k, cache)
    return FormulaSummary(
        n=n,
        k=k,
        p=p,
        q=q_conjectured(n, k, cache),
        p_ak=p_ak,
        binomial=binomial(n, k, cache),
        forms_agree=p.value == p_ak.value,
    )


def check_complement_identity(
    n: int, k: int, cache: BinomialCache | None = None
) -> ComplementReport:
    """p_conjectured + q_conjectured = C(n, k)."""
    p = p_conjectured(n, k, cache).value
    q = q_conjectured(n, k, cache).value
    total = binomial(n, k, cache)
    return ComplementReport(n=n, k=k, holds=p + q == total, p=p, q=q, total=total)


def _min_identity(
    name: str, n: int, k: int, precondition_ok: bool, force: bool, cache: BinomialCache | None
) -> IdentityReport:
    if not precondition_ok and not force:
        logger.warning(f"{name}: precondition fails at n={n}, k={k}")
        return IdentityReport(
            name=name, n=n, k=k, precondition_ok=False, evaluated=False,
            detail="precondition fails",
        )
    q = q_conjectured(n, k, cache)
    target = binomial(n - 1, k - 1, cache)
    return IdentityReport(
        name=name,
        n=n,
        k=k,
        precondition_ok=precondition_ok,
        evaluated=True,
        holds=q.value == target,
        lhs=q.value,
        rhs=target,
        extremizers=q.arg_list,
        detail=None if precondition_ok else "evaluated outside precondition",
    )


def check_mms_identity(
    n: int, k: int, force: bool = False, cache: BinomialCache | None = None
) -> IdentityReport:
    """q_conjectured(n, k) = C(n-1, k-1), claimed for n >= 4k."""
    _check_nk(n, k)
    return _min_identity("mms", n, k, n >= 4 * k, force, cache)


def check_divisibility_case(
    n: int, k: int, force: bool = False, cache: BinomialCache | None = None
) -> IdentityReport:
    """q_conjectured(n, k) = C(n-1, k-1) when k divides n."""
    _check_nk(n, k)
    return _min_identity("divisibility", n, k, n % k == 0, force, cache)


def check_periodicity(n: int, k: int, cache: BinomialCache | None = None) -> PeriodicityReport:
    """If q(n, k) = C(n-1, k-1) then q(n+k, k) = C(n+k-1, k-1)."""
    _check_nk(n, k)
    if q_conjectured(n, k, cache).value != binomial(n - 1, k - 1, cache):
        return PeriodicityReport(n=n, k=k, status=PeriodicityStatus.VACUOUS)
    shifted = q_conjectured(n + k, k, cache).value
    target = binomial(n + k - 1, k - 1, cache)
    return PeriodicityReport(
        n=n,
        k=k,
        status=PeriodicityStatus.HOLDS if shifted == target else PeriodicityStatus.FAILS,
        shifted_value=shifted,
        shifted_target=target,
    )


def check_periodicity_p(n: int, k: int, cache: BinomialCache | None = None) -> PeriodicityReport:
    """If p(n, k) = C(n-1, k) then p(n+k, k) = C(n+k-1, k)."""
    _check_nk(n, k)
    if p_conjectured(n, k, cache).value != binomial(n - 1, k, cache):
        return PeriodicityReport(n=n, k=k, side="p", status=PeriodicityStatus.VACUOUS)
    shifted = p_conjectured(n + k, k, cache).value
    target = binomial(n + k - 1, k, cache)
    return PeriodicityReport(
        n=n,
        k=k,
        side="p",
        status=PeriodicityStatus.HOLDS if shifted == target else PeriodicityStatus.FAILS,
        shifted_value=shifted,
        shifted_target=target,
    )


def _pairs(n_max: int, n_min: int = 3) -> Iterator[tuple[int, int]]:
    for n in range(max(n_min, 3), n_max + 1):
        for k in range(2, n):
            yield n, k


def scan_identities(
    n_max: int, mms_n_max: int | None = None, cache: BinomialCache | None = None
) -> dict[str, list[tuple[int, int]]]:
    """Counterexamples to each identity over 2 <= k < n <= n_max.

    The MMS identity is scanned over k <= n/4 up to ``mms_n_max`` (default n_max),
    with k = 1 included.
    """
    failures: dict[str, list[tuple[int, int]]] = {
        "complement": [],
        "forms": [],
        "mms": [],
        "divisibility": [],
    }
    for n, k in _pairs(n_max):
        p = p_conjectured(n, k, cache).value
        q = q_conjectured(n, k, cache).value
        if p + q != binomial(n, k, cache):
            failures["complement"].append((n, k))
        if p_ak_form(n, k, cache) != p:
            failures["forms"].append((n, k))
        if n % k == 0 and q != binomial(n - 1, k - 1, cache):
            failures["divisibility"].append((n, k))
    for n in range(4, (mms_n_max or n_max) + 1):
        for k in range(1, n // 4 + 1):
            if not check_mms_identity(n, k, cache=cache).holds:
                failures["mms"].append((n, k))
    for name, found in failures.items():
        if found:
            logger.error(f"identity {name}: {len(found)} counterexamples, first {found[0]}")
        else:
            logger.info(f"identity {name}: no counterexamples up to n={n_max}")
    return failures
