"""Tests for tail sums, the conjectured extremal counts and their identities."""

import pytest

from fracmatch.arith import BinomialCache, binomial
from fracmatch.core.errors import PreconditionError
from fracmatch.schemas.formula import PeriodicityStatus, TailParams
from fracmatch.services.formula_service import (
    check_complement_identity,
    check_divisibility_case,
    check_mms_identity,
    check_periodicity,
    check_periodicity_p,
    i_min_strict,
    i_min_weak,
    lower_sum_weak,
    n_s,
    p_ak_form,
    p_ak_profile,
    p_conjectured,
    q_conjectured,
    scan_identities,
    summarize,
    tail_sum_strict,
    tail_sum_weak,
)


@pytest.mark.parametrize(
    "n,k,a,expected",
    [(4, 2, 2, 1), (10, 3, 3, 85), (13, 3, 12, 220), (13, 3, 4, 202)],
)
def test_tail_sum_strict_examples(n: int, k: int, a: int, expected: int):
    """Test the strict tail on hand-computed cells."""
    assert tail_sum_strict(n, k, a) == expected


@pytest.mark.parametrize("n,k,a,expected", [(9, 2, 1, 8), (4, 2, 2, 5), (10, 3, 7, 35)])
def test_tail_sum_weak_examples(n: int, k: int, a: int, expected: int):
    """Test the weak tail on hand-computed cells."""
    assert tail_sum_weak(n, k, a) == expected


def test_threshold_indices():
    """Test the first index of each tail, including an integral threshold."""
    assert i_min_strict(4, 2, 2) == 2
    assert i_min_weak(4, 2, 2) == 1
    assert i_min_strict(10, 3, 3) == 1
    assert i_min_weak(10, 3, 3) == 1


def test_tail_sums_reject_bad_parameters():
    """Test the domain checks."""
    with pytest.raises(PreconditionError):
        tail_sum_strict(5, 5, 2)
    with pytest.raises(PreconditionError):
        tail_sum_weak(5, 2, 5)
    with pytest.raises(PreconditionError):
        p_conjectured(5, 0)


def test_tail_params_schema():
    """Test that TailParams keeps ka/n exact and validates ranges."""
    params = TailParams(n=10, k=3, a=7)
    assert params.threshold.numerator == 21
    assert params.threshold.denominator == 10
    with pytest.raises(ValueError):
        TailParams(n=10, k=10, a=3)


def test_index_substitution(cache: BinomialCache):
    """Test that strict and weak tails are related through a -> n - a."""
    for n in range(3, 41):
        for k in range(1, n):
            total = binomial(n, k, cache)
            for a in range(1, n):
                strict = tail_sum_strict(n, k, a, cache)
                assert strict == total - tail_sum_weak(n, k, n - a, cache)
                assert strict + lower_sum_weak(n, k, a, cache) == total


def test_vandermonde(cache: BinomialCache):
    """Test that the weak tail at threshold zero sums to C(n, k)."""
    for n in range(2, 41):
        for k in range(1, n):
            for a in range(1, n):
                full = sum(
                    binomial(a, i, cache) * binomial(n - a, k - i, cache) for i in range(k + 1)
                )
                assert full == binomial(n, k, cache)


@pytest.mark.slow
def test_index_substitution_and_vandermonde_to_two_hundred(cache: BinomialCache, rng):
    """Test both identities for n <= 200: sampled a below 200, every a at n = 200."""
    for n in range(41, 201):
        for k in range(1, n):
            total = binomial(n, k, cache)
            if n == 200:
                support = list(range(1, n))
            else:
                support = {1, n - 1, *rng.sample(range(1, n), min(5, n - 1))}
            for a in support:
                strict = tail_sum_strict(n, k, a, cache)
                assert strict == total - tail_sum_weak(n, k, n - a, cache)
                assert strict + lower_sum_weak(n, k, a, cache) == total
                full = sum(
                    binomial(a, i, cache) * binomial(n - a, k - i, cache) for i in range(k + 1)
                )
                assert full == total


def test_strict_tail_at_last_support(cache: BinomialCache):
    """Test tail_sum_strict(n, k, n - 1) = C(n - 1, k)."""
    for n in range(2, 121):
        for k in range(1, n):
            assert tail_sum_strict(n, k, n - 1, cache) == binomial(n - 1, k, cache)


@pytest.mark.slow
def test_strict_tail_at_last_support_to_five_hundred(cache: BinomialCache):
    """Test tail_sum_strict(n, k, n - 1) = C(n - 1, k) for every n <= 500."""
    for n in range(121, 501):
        for k in range(1, n):
            assert tail_sum_strict(n, k, n - 1, cache) == binomial(n - 1, k, cache)


def test_p_conjectured_examples():
    """Test maxima and their argument lists."""
    p = p_conjectured(10, 3)
    assert p.value == 85
    assert p.arg_list == [3]
    p = p_conjectured(4, 2)
    assert p.value == 3
    assert p.arg_list == [1, 3]
    assert p_conjectured(5, 1).value == 4


def test_q_conjectured_examples():
    """Test minima and their argument lists."""
    q = q_conjectured(9, 2)
    assert q.value == 8
    assert 1 in q.arg_list
    q = q_conjectured(10, 3)
    assert q.value == 35
    assert q.arg_list == [7]
    q = q_conjectured(4, 2)
    assert q.value == 3
    assert q.arg_list == [1, 3]


def test_p_ak_form_examples():
    """Test the s-indexed form on hand-computed values."""
    assert p_ak_form(10, 3) == 85
    assert p_ak_form(4, 2) == 3
    assert n_s(4, 2, 1) == 1
    profile = p_ak_profile(10, 3)
    assert profile.n_s == {1: 3, 2: 6, 3: 9}


def test_forms_agree(cache: BinomialCache):
    """Test that both forms of the conjectured p agree."""
    for n in range(2, 41):
        for k in range(2, n):
            assert p_ak_form(n, k, cache) == p_conjectured(n, k, cache).value


@pytest.mark.slow
def test_forms_agree_to_one_hundred(cache: BinomialCache):
    """Test both forms of the conjectured p up to n = 100."""
    for n in range(41, 101):
        for k in range(2, n):
            assert p_ak_form(n, k, cache) == p_conjectured(n, k, cache).value


def test_complement_identity():
    """Test p + q = C(n, k) on the example and a small range."""
    report = check_complement_identity(9, 2)
    assert report.holds
    assert (report.p, report.q, report.total) == (28, 8, 36)
    cache = BinomialCache()
    for n in range(3, 31):
        for k in range(2, n):
            assert check_complement_identity(n, k, cache).holds


@pytest.mark.slow
def test_mms_identity_to_four_hundred(cache: BinomialCache):
    """Test q(n, k) = C(n - 1, k - 1) for every n <= 400 and k <= n/4."""
    for n in range(4, 401):
        for k in range(1, n // 4 + 1):
            assert check_mms_identity(n, k, cache=cache).holds


def test_mms_identity_examples():
    """Test the identity where it applies and a forced evaluation where it does not."""
    assert check_mms_identity(9, 2).holds
    report = check_mms_identity(12, 3)
    assert report.holds
    assert report.lhs == 55
    skipped = check_mms_identity(10, 3)
    assert not skipped.precondition_ok
    assert not skipped.evaluated
    assert skipped.holds is None
    forced = check_mms_identity(10, 3, force=True)
    assert forced.evaluated
    assert forced.holds is False
    assert (forced.lhs, forced.rhs) == (35, 36)


@pytest.mark.parametrize("n,k", [(4, 2), (6, 2), (12, 3)])
def test_divisibility_case(n: int, k: int):
    """Test the identity when k divides n."""
    assert check_divisibility_case(n, k).holds


def test_periodicity():
    """Test the shift n -> n + k on holding and vacuous cases."""
    assert check_periodicity(9, 2).status is PeriodicityStatus.HOLDS
    report = check_periodicity(12, 3)
    assert report.status is PeriodicityStatus.HOLDS
    assert report.shifted_value == report.shifted_target == binomial(14, 2)
    assert check_periodicity(10, 3).status is PeriodicityStatus.VACUOUS
    assert check_periodicity_p(10, 3).status is PeriodicityStatus.VACUOUS


def test_summarize():
    """Test the combined summary `eval` prints."""
    summary = summarize(10, 3)
    assert summary.p.value == 85
    assert summary.q.value == 35
    assert summary.binomial == 120
    assert summary.forms_agree


def test_scan_identities_clean():
    """Test that a small scan finds no counterexamples."""
    failures = scan_identities(14, mms_n_max=30)
    assert failures == {"complement": [], "forms": [], "mms": [], "divisibility": []}
