"""The count N(gamma), its Gaussian smoothing and annealed maximization over the simplex.

gamma has n-1 coordinates (gamma_n = 0). N counts k-sets x of [n] with
sum_j gamma_j x_j > k/n; the smoothing replaces the indicator by Phi(./sigma).
"""

import math
from collections import defaultdict
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np
from loguru import logger
from scipy.stats import norm

from fracmatch.core.errors import IndeterminateComparisonError, PreconditionError
from fracmatch.schemas.smooth import (
    AnnealResult,
    AnnealSummary,
    SmoothConfig,
    StepProfile,
    TwoLevel,
)
from fracmatch.services.formula_service import p_conjectured

GUARD_BAND = 1e-12
GammaLike = Sequence[Fraction] | Sequence[float] | np.ndarray


@lru_cache(maxsize=32)
def k_set_matrix(n: int, k: int) -> np.ndarray:
    """0/1 matrix with one row per k-subset of [n] (lexicographic), read-only."""
    rows = np.zeros((math.comb(n, k), n), dtype=np.float64)
    for r, c in enumerate(combinations(range(n), k)):
        rows[r, list(c)] = 1.0
    rows.setflags(write=False)
    return rows


def _is_exact(gamma: GammaLike) -> bool:
    return not isinstance(gamma, np.ndarray) and all(
        isinstance(g, int | Fraction) for g in gamma
    )


def _check_gamma(gamma: GammaLike, n: int, k: int) -> None:
    if not 1 <= k < n:
        raise PreconditionError(f"need 1 <= k < n, got n={n}, k={k}")
    if len(gamma) > n - 1:
        raise PreconditionError(f"gamma has {len(gamma)} coordinates, at most {n - 1} allowed")
    if any(g < 0 for g in gamma):
        raise PreconditionError("gamma must be nonnegative")
    if _is_exact(gamma):
        if sum(gamma, Fraction(0)) != 1:
            raise PreconditionError("gamma must sum to 1")
    elif abs(float(np.sum(gamma)) - 1.0) > 1e-9:
        raise PreconditionError("gamma must sum to 1")


def _as_array(gamma: GammaLike, n: int) -> np.ndarray:
    out = np.zeros(n - 1)
    out[: len(gamma)] = np.asarray([float(g) for g in gamma])
    return out


def _exact_sums(gamma: Sequence[Fraction], n: int, k: int) -> dict[Fraction, int]:
    """Multiplicity of every value of sum_j gamma_j x_j over k-sets x."""
    groups: dict[Fraction, int] = defaultdict(int)
    for g in gamma:
        groups[Fraction(g)] += 1
    groups[Fraction(0)] += n - len(gamma)
    states: dict[tuple[int, Fraction], int] = {(0, Fraction(0)): 1}
    for value, mult in groups.items():
        nxt: dict[tuple[int, Fraction], int] = defaultdict(int)
        for (chosen, total), ways in states.items():
            for t in range(min(mult, k - chosen) + 1):
                nxt[(chosen + t, total + t * value)] += ways * math.comb(mult, t)
        states = nxt
    return {total: ways for (chosen, total), ways in states.items() if chosen == k}


def count_N(gamma: GammaLike, n: int, k: int) -> int:
    """Number of k-sets x with sum_j gamma_j x_j > k/n.

    Exact for rational gamma. For float gamma a sum within GUARD_BAND of k/n
    raises IndeterminateComparisonError.
    """
    _check_gamma(gamma, n, k)
    threshold = Fraction(k, n)
    if _is_exact(gamma):
        return sum(w for s, w in _exact_sums(gamma, n, k).items() if s > threshold)
    diff = k_set_matrix(n, k)[:, : n - 1] @ _as_array(gamma, n) - k / n
    close = np.abs(diff) < GUARD_BAND
    if close.any():
        raise IndeterminateComparisonError(
            f"{int(close.sum())} k-set sums within {GUARD_BAND} of {k}/{n}"
        )
    return int(np.count_nonzero(diff > 0))


def margin(gamma: GammaLike, n: int, k: int) -> Fraction | float:
    """min over k-sets x of |sum_j gamma_j x_j - k/n|; exact for rational gamma."""
    _check_gamma(gamma, n, k)
    if _is_exact(gamma):
        threshold = Fraction(k, n)
        return min(abs(s - threshold) for s in _exact_sums(gamma, n, k))
    diff = k_set_matrix(n, k)[:, : n - 1] @ _as_array(gamma, n) - k / n
    return float(np.abs(diff).min())


def smoothed_f(gamma: GammaLike, sigma: float, n: int, k: int) -> float:
    """sum over k-sets x of Phi((sum_j gamma_j x_j - k/n) / sigma)."""
    if sigma <= 0:
        raise PreconditionError("sigma must be positive")
    s = k_set_matrix(n, k)[:, : n - 1] @ _as_array(gamma, n) - k / n
    return float(norm.cdf(s / sigma).sum())


def _full_grad(g: np.ndarray, sigma: float, n: int, k: int) -> np.ndarray:
    x = k_set_matrix(n, k)[:, : n - 1]
    dens = norm.pdf((x @ g - k / n) / sigma) / sigma
    return dens @ x


def smoothed_grad(gamma: GammaLike, sigma: float, n: int, k: int, a: int) -> np.ndarray:
    """Gradient of smoothed_f in the free coordinates gamma_1..gamma_{a-1}.

    gamma_a = 1 - sum_{j<a} gamma_j is eliminated, so entry j is
    df/dgamma_j - df/dgamma_a. Entries j >= a are zero.
    """
    if not 1 <= a <= n - 1:
        raise PreconditionError(f"need 1 <= a <= n-1, got a={a}")
    if sigma <= 0:
        raise PreconditionError("sigma must be positive")
    g = _as_array(gamma, n)
    if (g[:a] <= 0).any() or (g[a:] != 0).any():
        raise PreconditionError(f"gamma must be interior on support [1, {a}]")
    full = _full_grad(g, sigma, n, k)
    out = np.zeros(n - 1)
    out[: a - 1] = full[: a - 1] - full[a - 1]
    return out


def project_simplex(v: np.ndarray, z: float = 1.0) -> np.ndarray:
    """Euclidean projection onto {y >= 0, sum y = z} by sorting."""
    u = np.sort(v)[::-1]
    cssv = np.cumsum(u) - z
    ind = np.arange(1, len(v) + 1)
    rho = np.count_nonzero(u - cssv / ind > 0)
    theta = cssv[rho - 1] / rho
    return np.maximum(v - theta, 0.0)


def uniform_step(n: int, a: int) -> list[Fraction]:
    """gamma_j = 1/a for j <= a, 0 beyond."""
    if not 1 <= a <= n - 1:
        raise PreconditionError(f"need 1 <= a <= n-1, got n={n}, a={a}")
    return [Fraction(1, a)] * a + [Fraction(0)] * (n - 1 - a)


def two_level_gamma(
    a: int,
    b: int,
    lam: Fraction | float,
    gamma_a: Fraction | float,
    n: int | None = None,
) -> list:
    """lambda - gamma_a on the first b coordinates, gamma_a on the rest of [a].

    Padded with zeros to n - 1 coordinates when n is given.
    """
    if not 1 <= b < a:
        raise PreconditionError(f"need 1 <= b < a, got a={a}, b={b}")
    gamma = [lam - gamma_a] * b + [gamma_a] * (a - b)
    if n is not None:
        if a > n - 1:
            raise PreconditionError(f"support {a} exceeds n-1={n - 1}")
        gamma += [type(gamma_a)(0)] * (n - 1 - a)
    return gamma


def _mu_from_lambda(lam: float, n: int, k: int) -> float:
    if n == 2:
        return k / n
    c = (k - 1) / (n - 2)
    return c + lam * (1 - 2 * c) / 2


def analyze_step(gamma: GammaLike, n: int, k: int, tol: float = 1e-6) -> StepProfile:
    """Classify gamma as a uniform step, a two-level vector or neither."""
    g = _as_array(gamma, n)
    nonzero = np.flatnonzero(g > tol)
    a = int(nonzero[-1]) + 1 if nonzero.size else 0
    vals = g[:a]
    if a and vals.max() - vals.min() <= tol:
        return StepProfile(support=a, is_uniform_step=True, mu=k / n)

    two_level = None
    if a >= 2:
        high, low = vals[0], vals[-1]
        drops = np.flatnonzero(np.abs(vals - high) > tol)
        b = int(drops[0]) if drops.size else a
        if (
            1 <= b < a
            and high - low > tol
            and np.abs(vals[:b] - high).max() <= tol
            and np.abs(vals[b:] - low).max() <= tol
        ):
            lam = float(high + low)
            residual = b * lam + (a - 2 * b) * float(low) - 1.0
            two_level = TwoLevel(
                b=b,
                lam=lam,
                gamma_a=float(low),
                normalization_residual=residual,
                normalization_holds=abs(residual) <= tol * a,
            )
    mu = _mu_from_lambda(two_level.lam, n, k) if two_level else k / n
    return StepProfile(support=a, is_uniform_step=False, two_level=two_level, mu=mu)


def _evaluate(z: np.ndarray, n: int, k: int, tol: float) -> tuple[int | None, np.ndarray]:
    """N at a support vector; near-uniform vectors are snapped to the exact step."""
    g = np.zeros(n - 1)
    g[: len(z)] = np.sort(z)[::-1]
    profile = analyze_step(g, n, k, tol)
    if profile.is_uniform_step:
        snapped = uniform_step(n, profile.support)
        return count_N(snapped, n, k), _as_array(snapped, n)
    try:
        return count_N(g / g.sum(), n, k), g
    except IndeterminateComparisonError as e:
        logger.debug(f"skipping near-threshold point: {e}")
        return None, g


def _ascend(
    start: np.ndarray, n: int, k: int, a: int, config: SmoothConfig
) -> tuple[int | None, np.ndarray]:
    z = start.copy()
    best_value, best_gamma = _evaluate(z, n, k, config.structure_tol)
    for sigma in config.sigma_schedule:
        for _ in range(config.max_iters):
            g = np.zeros(n - 1)
            g[:a] = z
            grad = _full_grad(g, sigma, n, k)[:a]
            tangent = grad - grad.mean()
            size = np.linalg.norm(tangent)
            if size <= 1e-12 * max(1.0, float(np.abs(grad).max())):
                break
            z = project_simplex(z + config.step_size * sigma * tangent / size)
        value, gamma = _evaluate(z, n, k, config.structure_tol)
        if value is not None and (best_value is None or value > best_value):
            best_value, best_gamma = value, gamma
    return best_value, best_gamma


def anneal_optimize(n: int, k: int, a: int, config: SmoothConfig | None = None) -> AnnealResult:
    """Projected-gradient ascent of smoothed_f on the simplex over support [a].

    Restarts: the uniform step on [a], then Dirichlet starts from a generator
    seeded by (seed, n, k, a). The best N wins; ties go to the lexicographically
    smallest rounded gamma.

    The uniform start keeps N_star >= tail_sum_strict(n, k, a) for every seed. Above
    that floor, random starts may find different local optima, so N_star for one
    support can change with the seed.
    """
    config = config or SmoothConfig()
    if not 1 <= k < n or not 1 <= a <= n - 1:
        raise PreconditionError(f"need 1 <= k < n and 1 <= a <= n-1, got ({n}, {k}, {a})")
    rng = np.random.default_rng([config.seed, n, k, a])
    starts = [np.full(a, 1.0 / a)]
    starts += [rng.dirichlet(np.ones(a)) for _ in range(config.restarts - 1)]

    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        outcomes = list(pool.map(lambda s: _ascend(s, n, k, a, config), starts))

    def rank(item: tuple[int | None, np.ndarray]) -> tuple:
        value, gamma = item
        return (-(value if value is not None else -1), tuple(np.round(gamma, 9)))

    n_star, gamma_star = min(outcomes, key=rank)
    if n_star is None:
        raise IndeterminateComparisonError(f"no restart produced a decidable count at a={a}")
    profile = analyze_step(gamma_star, n, k, config.structure_tol)
    logger.debug(f"anneal ({n}, {k}, a={a}): N*={n_star}, uniform={profile.is_uniform_step}")
    return AnnealResult(
        n=n,
        k=k,
        a=a,
        gamma_star=gamma_star.tolist(),
        n_star=n_star,
        profile=profile,
        restart_values=[v for v, _ in outcomes],
    )


def anneal_all(n: int, k: int, config: SmoothConfig | None = None) -> AnnealSummary:
    """anneal_optimize for every support a, compared with p_conjectured(n, k).

    Every support includes its uniform start, so the best N_star is at least
    p_conjectured for any seed. Where the conjectured value is the maximum, the
    summary n_star therefore does not depend on the seed.
    """
    results = [anneal_optimize(n, k, a, config) for a in range(1, n)]
    best = max(results, key=lambda r: (r.n_star, -r.a))
    target = p_conjectured(n, k).value
    if best.n_star > target:
        logger.error(f"({n}, {k}): anneal found N={best.n_star} above p_conjectured={target}")
    elif best.n_star < target:
        logger.warning(f"({n}, {k}): anneal reached {best.n_star}, p_conjectured={target}")
    else:
        logger.info(f"({n}, {k}): anneal reached p_conjectured={target} at a={best.a}")
    return AnnealSummary(
        n=n,
        k=k,
        results=results,
        best_a=best.a,
        n_star=best.n_star,
        p_conjectured=target,
        reached=best.n_star == target,
    )
