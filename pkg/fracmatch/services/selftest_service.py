"""Fast property suite behind ``fracmatch selftest``."""

import math
import random
from collections.abc import Callable
from fractions import Fraction

import numpy as np
from loguru import logger
from scipy.stats import norm

from fracmatch.arith import (
    BinomialCache,
    binomial,
    get_binomial_cache,
    log2_binomial_bounds,
    log2_int_bounds,
)
from fracmatch.core.errors import FracmatchError
from fracmatch.schemas.run import SelftestCheck, SelftestReport
from fracmatch.services.formula_service import (
    check_complement_identity,
    check_mms_identity,
    lower_sum_weak,
    p_ak_form,
    p_conjectured,
    tail_sum_strict,
)
from fracmatch.services.hull_service import has_pfm, random_hypergraph, verify_certificate
from fracmatch.services.smooth_service import count_N, margin, smoothed_f, smoothed_grad
from fracmatch.services.sweep_service import audit_filter, random_cells, term_run

Check = Callable[[BinomialCache, random.Random], str | None]


class InvariantFailed(FracmatchError):
    """A selftest invariant did not hold."""


def _pascal(cache: BinomialCache, rng: random.Random) -> str:
    for n in range(1, 61):
        for k in range(1, n):
            if binomial(n, k, cache) != binomial(n - 1, k, cache) + binomial(n - 1, k - 1, cache):
                raise InvariantFailed(f"C({n},{k}) breaks Pascal's rule")
    return "n <= 60"


def _vandermonde(cache: BinomialCache, rng: random.Random) -> str:
    for n in range(2, 41):
        for k in range(1, n):
            total = binomial(n, k, cache)
            for a in range(1, n):
                if tail_sum_strict(n, k, a, cache) + lower_sum_weak(n, k, a, cache) != total:
                    raise InvariantFailed(f"tail split at ({n}, {k}, {a}) misses C({n},{k})")
    return "n <= 40"


def _complement(cache: BinomialCache, rng: random.Random) -> str:
    for n in range(3, 21):
        for k in range(2, n):
            report = check_complement_identity(n, k, cache)
            if not report.holds:
                raise InvariantFailed(f"p + q = {report.p + report.q} != {report.total} at ({n}, {k})")
    return "n <= 20"


def _forms(cache: BinomialCache, rng: random.Random) -> str:
    for n in range(3, 21):
        for k in range(2, n):
            if p_ak_form(n, k, cache) != p_conjectured(n, k, cache).value:
                raise InvariantFailed(f"the two forms of p differ at ({n}, {k})")
    return "n <= 20"


def _mms(cache: BinomialCache, rng: random.Random) -> str:
    for n in range(4, 41):
        for k in range(1, n // 4 + 1):
            if not check_mms_identity(n, k, cache=cache).holds:
                raise InvariantFailed(f"q({n},{k}) != C({n - 1},{k - 1})")
    return "n <= 40, k <= n/4"


def _recurrence(cache: BinomialCache, rng: random.Random) -> str:
    for _ in range(200):
        n = rng.randint(2, 200)
        k = rng.randint(1, n - 1)
        a = rng.randint(1, n - 1)
        lo = max(0, k - (n - a))
        for i, term in enumerate(term_run(n, k, a, 0, min(a, k), cache), start=lo):
            if term != math.comb(a, i) * math.comb(n - a, k - i):
                raise InvariantFailed(f"term recurrence wrong at ({n}, {k}, {a}, {i})")
    return "200 random cells"


def _enclosure(cache: BinomialCache, rng: random.Random) -> str:
    for _ in range(200):
        n = rng.randint(1, 3000)
        k = rng.randint(0, n)
        bound = log2_binomial_bounds(n, k)
        exact = log2_int_bounds(math.comb(n, k))
        if exact.hi < bound.lo or exact.lo > bound.hi:
            raise InvariantFailed(f"log2 C({n},{k}) outside {bound}")
    return "200 random (n, k)"


def _filter_soundness(cache: BinomialCache, rng: random.Random) -> str:
    in_scope = audit_filter(random_cells(200, 300, seed=rng.randrange(2**31)))
    full = audit_filter(random_cells(200, 60, seed=rng.randrange(2**31), full_range=True))
    disagreements = in_scope.disagreements + full.disagreements
    if disagreements:
        raise InvariantFailed(f"filter disagrees at {disagreements[:3]}")
    if not full.violations:
        raise InvariantFailed("full-range sample holds no violating cell")
    return (
        f"400 cells, {full.violations} violating, "
        f"paths {dict(sorted(in_scope.path_counts.items()))}"
    )


def _gradient(cache: BinomialCache, rng: random.Random) -> str:
    n, k, a, sigma, h = 8, 2, 5, 0.2, 1e-5
    np_rng = np.random.default_rng(rng.randrange(2**31))
    worst = 0.0
    for _ in range(10):
        gamma = np.zeros(n - 1)
        gamma[:a] = np_rng.dirichlet(np.ones(a))
        grad = smoothed_grad(gamma, sigma, n, k, a)
        fd = np.zeros(n - 1)
        for j in range(a - 1):
            step = np.zeros(n - 1)
            step[j], step[a - 1] = h, -h
            up = smoothed_f(gamma + step, sigma, n, k)
            down = smoothed_f(gamma - step, sigma, n, k)
            fd[j] = (up - down) / (2 * h)
        err = float(np.linalg.norm(fd - grad) / max(np.linalg.norm(grad), 1e-12))
        worst = max(worst, err)
    if worst >= 1e-6:
        raise InvariantFailed(f"gradient relative error {worst:.2e}")
    return f"max relative error {worst:.1e}"


def _smoothing_gap(cache: BinomialCache, rng: random.Random) -> str:
    n, k, sigma = 8, 3, 0.05
    for _ in range(20):
        raw = [rng.randint(0, 20) for _ in range(n - 1)]
        if not any(raw):
            raw[0] = 1
        gamma = [Fraction(r, sum(raw)) for r in raw]
        gap = abs(count_N(gamma, n, k) - smoothed_f(gamma, sigma, n, k))
        allowed = math.comb(n, k) * norm.cdf(-float(margin(gamma, n, k)) / sigma)
        if gap > allowed + 1e-9:
            raise InvariantFailed(f"|N - f| = {gap} exceeds {allowed}")
    return "20 random rational gamma"


def _certificates(cache: BinomialCache, rng: random.Random) -> str:
    for _ in range(20):
        n = rng.randint(3, 7)
        k = rng.randint(1, n - 1)
        m = rng.randint(1, min(math.comb(n, k), 12))
        h = random_hypergraph(n, k, m, rng)
        if not verify_certificate(h, has_pfm(h)):
            raise InvariantFailed(f"certificate failed on {h.edge_sets()}")
    return "20 random instances"


CHECKS: list[tuple[str, Check]] = [
    ("pascal", _pascal),
    ("vandermonde", _vandermonde),
    ("complement_identity", _complement),
    ("forms_agree", _forms),
    ("mms_identity", _mms),
    ("term_recurrence", _recurrence),
    ("log2_enclosure", _enclosure),
    ("filter_soundness", _filter_soundness),
    ("gradient_check", _gradient),
    ("smoothing_gap", _smoothing_gap),
    ("certificates", _certificates),
]


def run_selftest(seed: int = 0, cache: BinomialCache | None = None) -> SelftestReport:
    """Run every named invariant; a failure never stops the remaining checks."""
    if cache is None:
        cache = get_binomial_cache()
    checks = []
    for name, check in CHECKS:
        rng = random.Random(f"{seed}:{name}")
        try:
            detail = check(cache, rng)
            checks.append(SelftestCheck(name=name, ok=True, detail=detail))
            logger.info(f"selftest {name}: ok ({detail})")
        except (FracmatchError, ValueError) as e:
            checks.append(SelftestCheck(name=name, ok=False, detail=str(e)))
            logger.error(f"selftest {name}: FAILED ({e})")
    return SelftestReport(seed=seed, checks=checks)
