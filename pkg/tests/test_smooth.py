"""Tests for N(gamma), its smoothing and the annealed optimizer."""

import math
import random
from fractions import Fraction

import numpy as np
import pytest
from scipy.stats import norm

from fracmatch.core.errors import IndeterminateComparisonError, PreconditionError
from fracmatch.schemas.smooth import SmoothConfig
from fracmatch.services.formula_service import p_conjectured, tail_sum_strict
from fracmatch.services.smooth_service import (
    analyze_step,
    anneal_all,
    anneal_optimize,
    count_N,
    k_set_matrix,
    margin,
    project_simplex,
    smoothed_f,
    smoothed_grad,
    two_level_gamma,
    uniform_step,
)

F = Fraction


@pytest.fixture
def small_config() -> SmoothConfig:
    """Create a short annealing schedule."""
    return SmoothConfig(
        sigma_schedule=[0.2, 0.05, 0.01], max_iters=50, restarts=3, workers=2, seed=11
    )


def test_k_set_matrix_shape():
    """Test one row per k-set with k ones each."""
    x = k_set_matrix(6, 2)
    assert x.shape == (15, 6)
    assert (x.sum(axis=1) == 2).all()
    assert not x.flags.writeable


def test_step_identity():
    """Test that the uniform step on [a] counts the strict tail."""
    for n in range(3, 13):
        for k in range(1, n):
            for a in range(1, n):
                assert count_N(uniform_step(n, a), n, k) == tail_sum_strict(n, k, a)


def test_count_N_float_matches_exact():
    """Test the float path away from the threshold."""
    exact = [F(1, 2), F(3, 10), F(1, 5)]
    floats = [0.5, 0.3, 0.2]
    assert count_N(floats, 8, 2) == count_N(exact, 8, 2)


def test_count_N_guard_band():
    """Test that a float tie at k/n is reported instead of guessed."""
    with pytest.raises(IndeterminateComparisonError):
        count_N([0.5, 0.5, 0.0], 4, 2)
    assert count_N([F(1, 2), F(1, 2), F(0)], 4, 2) == tail_sum_strict(4, 2, 2)


def test_count_N_preconditions():
    """Test the checks on gamma."""
    with pytest.raises(PreconditionError):
        count_N([F(1, 2), F(1, 4)], 5, 2)
    with pytest.raises(PreconditionError):
        count_N([F(3, 2), F(-1, 2)], 5, 2)
    with pytest.raises(PreconditionError):
        count_N([F(1, 4)] * 4, 4, 2)


def test_margin():
    """Test the exact distance of the k-set sums from k/n."""
    assert margin(uniform_step(4, 2), 4, 2) == 0
    assert margin(uniform_step(10, 3), 10, 3) == F(1, 30)


def test_smoothed_f_limits():
    """Test that the smoothing tends to N for small sigma and to C(n,k)/2 for large."""
    gamma = uniform_step(10, 3)
    assert abs(smoothed_f(gamma, 1e-4, 10, 3) - 85) < 1e-9
    assert abs(smoothed_f(gamma, 1e6, 10, 3) - 60) < 1e-3
    with pytest.raises(PreconditionError):
        smoothed_f(gamma, 0.0, 10, 3)


@pytest.mark.parametrize("sigma", [0.1, 0.03, 0.01])
def test_smoothing_error_within_margin_bound(sigma: float):
    """Test |N - f| <= C(n,k) Phi(-margin/sigma) on 100 random rational gamma."""
    n, k = 8, 3
    rng = random.Random(23)
    for _ in range(100):
        raw = [rng.randint(0, 30) for _ in range(n - 1)]
        raw[0] += 1
        gamma = [F(r, sum(raw)) for r in raw]
        gap = abs(count_N(gamma, n, k) - smoothed_f(gamma, sigma, n, k))
        allowed = math.comb(n, k) * norm.cdf(-float(margin(gamma, n, k)) / sigma)
        assert gap <= allowed + 1e-9


def test_smoothed_grad_finite_differences():
    """Test the reduced gradient against central differences."""
    n, k, a, sigma, eps = 8, 2, 4, 0.1, 1e-6
    gamma = np.array([0.4, 0.3, 0.2, 0.1, 0.0, 0.0, 0.0])
    grad = smoothed_grad(gamma, sigma, n, k, a)
    for j in range(a - 1):
        step = np.zeros(n - 1)
        step[j], step[a - 1] = eps, -eps
        numeric = (
            smoothed_f(gamma + step, sigma, n, k) - smoothed_f(gamma - step, sigma, n, k)
        ) / (2 * eps)
        assert abs(numeric - grad[j]) <= 1e-5 * max(1.0, abs(grad[j]))
    assert (grad[a - 1:] == 0).all()


def test_smoothed_grad_random_interior_points():
    """Test the reduced gradient against central differences on 100 random gamma."""
    n, k, a, sigma, h = 8, 2, 4, 0.1, 1e-5
    rng = np.random.default_rng(17)
    for _ in range(100):
        gamma = np.zeros(n - 1)
        gamma[:a] = rng.dirichlet(np.ones(a))
        grad = smoothed_grad(gamma, sigma, n, k, a)
        numeric = np.zeros(n - 1)
        for j in range(a - 1):
            step = np.zeros(n - 1)
            step[j], step[a - 1] = h, -h
            up = smoothed_f(gamma + step, sigma, n, k)
            down = smoothed_f(gamma - step, sigma, n, k)
            numeric[j] = (up - down) / (2 * h)
        assert np.linalg.norm(numeric - grad) < 1e-6 * max(1.0, np.linalg.norm(grad))


@pytest.mark.parametrize("sigma", [0.5, 0.1, 0.02])
def test_smoothed_grad_zero_at_uniform_step(sigma: float):
    """Test that the coordinates of a uniform step are exchangeable."""
    grad = smoothed_grad(uniform_step(10, 3), sigma, 10, 3, 3)
    assert np.allclose(grad, 0.0, atol=1e-9)


@pytest.mark.parametrize("sigma", [0.1, 0.05, 0.02])
def test_smoothed_grad_pushes_back_to_step(sigma: float):
    """Test that the gradient points from a perturbed step back to the uniform one."""
    eps = 0.01
    third = 1 / 3
    ahead = smoothed_grad([third + eps, third, third - eps], sigma, 10, 3, 3)
    assert ahead[0] < 0
    behind = smoothed_grad([third - eps, third, third + eps], sigma, 10, 3, 3)
    assert behind[0] > 0


def test_smoothed_grad_needs_interior_point():
    """Test that a zero inside the support is rejected."""
    with pytest.raises(PreconditionError):
        smoothed_grad(np.array([0.5, 0.5, 0.0]), 0.1, 4, 2, 3)


def test_project_simplex():
    """Test the projection on points on and off the simplex."""
    on = np.array([0.2, 0.3, 0.5])
    assert np.allclose(project_simplex(on), on)
    assert np.allclose(project_simplex(np.array([1.0, 1.0])), [0.5, 0.5])
    assert np.allclose(project_simplex(np.array([2.0, 0.0])), [1.0, 0.0])
    off = project_simplex(np.array([0.9, -0.4, 0.3, 0.7]))
    assert (off >= 0).all()
    assert abs(off.sum() - 1.0) < 1e-12


def test_two_level_gamma_and_profile():
    """Test construction and recognition of a two-level vector."""
    gamma = two_level_gamma(5, 2, F(9, 20), F(1, 10), n=8)
    assert gamma == [F(7, 20), F(7, 20), F(1, 10), F(1, 10), F(1, 10), F(0), F(0)]
    assert sum(gamma) == 1
    profile = analyze_step(gamma, 8, 2)
    assert not profile.is_uniform_step
    assert profile.support == 5
    assert profile.two_level is not None
    assert profile.two_level.b == 2
    assert profile.two_level.lam == pytest.approx(0.45)
    assert profile.two_level.normalization_holds
    assert profile.mu == pytest.approx(1 / 6 + 0.45 / 3)
    with pytest.raises(PreconditionError):
        two_level_gamma(3, 3, F(1, 2), F(1, 6))


def test_analyze_uniform_step():
    """Test recognition of a uniform step."""
    profile = analyze_step(uniform_step(8, 3), 8, 2)
    assert profile.is_uniform_step
    assert profile.support == 3
    assert profile.two_level is None


def test_smooth_config_validation():
    """Test that sigma schedules must decrease and stay positive."""
    with pytest.raises(ValueError):
        SmoothConfig(sigma_schedule=[0.1, 0.2])
    with pytest.raises(ValueError):
        SmoothConfig(sigma_schedule=[0.1, -0.1])
    with pytest.raises(ValueError):
        SmoothConfig(unknown=1)
    assert len(SmoothConfig().sigma_schedule) == 20


def test_anneal_optimize_bounds(small_config: SmoothConfig):
    """Test that the optimizer never loses the uniform start and stays below p."""
    n, k = 8, 2
    target = p_conjectured(n, k).value
    for a in (2, 4, 7):
        result = anneal_optimize(n, k, a, small_config)
        assert tail_sum_strict(n, k, a) <= result.n_star <= target
        assert len(result.restart_values) == small_config.restarts
        assert abs(sum(result.gamma_star) - 1.0) < 1e-9


def test_anneal_optimize_deterministic(small_config: SmoothConfig):
    """Test that equal seeds give equal results."""
    first = anneal_optimize(8, 2, 5, small_config)
    second = anneal_optimize(8, 2, 5, small_config)
    assert first.gamma_star == second.gamma_star
    assert first.n_star == second.n_star


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_anneal_all_same_value_across_seeds(small_config: SmoothConfig, seed: int):
    """Test that the best N_star over all supports does not depend on the seed."""
    config = small_config.model_copy(update={"seed": seed})
    summary = anneal_all(8, 2, config)
    assert summary.n_star == p_conjectured(8, 2).value


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_anneal_optimize_same_value_on_maximizing_support(small_config: SmoothConfig, seed: int):
    """Test that supports attaining the conjectured maximum keep it for every seed."""
    config = small_config.model_copy(update={"seed": seed})
    for n, k in [(8, 2), (10, 3)]:
        profile = p_conjectured(n, k)
        for a in profile.arg_list:
            result = anneal_optimize(n, k, a, config)
            assert result.n_star == profile.value
            assert result.restart_values[0] == profile.value


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_anneal_optimize_floor_across_seeds(small_config: SmoothConfig, seed: int):
    """Test that every seed keeps at least the uniform-step count on each support."""
    config = small_config.model_copy(update={"seed": seed})
    for a in range(1, 10):
        result = anneal_optimize(10, 3, a, config)
        assert tail_sum_strict(10, 3, a) <= result.n_star <= 85


def test_anneal_all_reaches_conjectured(small_config: SmoothConfig):
    """Test that the best support reaches the conjectured maximum."""
    summary = anneal_all(8, 2, small_config)
    assert summary.reached
    assert summary.n_star == summary.p_conjectured == p_conjectured(8, 2).value
    assert [r.a for r in summary.results] == list(range(1, 8))


@pytest.mark.slow
@pytest.mark.parametrize("n,k", [(10, 3), (12, 4), (13, 3)])
def test_anneal_all_reaches_conjectured_larger(n: int, k: int):
    """Test the default schedule on the larger optimizer cases."""
    summary = anneal_all(n, k, SmoothConfig(workers=2, seed=1))
    assert summary.reached
    best = next(r for r in summary.results if r.a == summary.best_a)
    assert best.n_star == p_conjectured(n, k).value


@pytest.mark.slow
@pytest.mark.parametrize("n,k", [(10, 3), (12, 4), (13, 3)])
def test_anneal_all_value_stable_across_seeds(n: int, k: int):
    """Test the default schedule under three seeds: the best value never moves."""
    values = {anneal_all(n, k, SmoothConfig(workers=2, seed=seed)).n_star for seed in (0, 5, 9)}
    assert values == {p_conjectured(n, k).value}


def test_anneal_rejects_bad_support(small_config: SmoothConfig):
    """Test the support range check."""
    with pytest.raises(PreconditionError):
        anneal_optimize(8, 2, 8, small_config)
