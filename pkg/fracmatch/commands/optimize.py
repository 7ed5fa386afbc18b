"""`fracmatch optimize`: annealed maximization of the smoothed count."""

import argparse

from fracmatch.commands.common import (
    EXIT_OK,
    EXIT_VIOLATION,
    UsageError,
    add_common,
    emit,
    resolve_jobs,
    resolve_seed,
)
from fracmatch.schemas.run import RunConfig
from fracmatch.schemas.smooth import AnnealResult, SmoothConfig
from fracmatch.services.formula_service import p_conjectured
from fracmatch.services.smooth_service import anneal_all, anneal_optimize


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("optimize", help="anneal the smoothed count N(gamma)")
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument("--k", type=int, required=True)
    parser.add_argument("--a", type=int, help="support size of gamma")
    parser.add_argument("--all-a", action="store_true", help="every support a in [1, n-1]")
    parser.add_argument("--restarts", type=int)
    parser.add_argument("--max-iters", type=int)
    parser.add_argument("--step-size", type=float)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--jobs", type=int, help="threads for restarts")
    add_common(parser)
    parser.set_defaults(handler=run)


def build_config(args: argparse.Namespace, run_config: RunConfig) -> SmoothConfig:
    """The run file's ``smooth`` section (or defaults), overridden by CLI flags."""
    if run_config.smooth is None:
        values = SmoothConfig(
            seed=resolve_seed(args, run_config), workers=resolve_jobs(args, run_config)
        ).model_dump()
    else:
        values = run_config.smooth.model_dump()
    for dest in ("restarts", "max_iters", "step_size", "seed"):
        value = getattr(args, dest)
        if value is not None:
            values[dest] = value
    if args.jobs is not None:
        values["workers"] = args.jobs
    return SmoothConfig.model_validate(values)


def _describe(result: AnnealResult) -> str:
    profile = result.profile
    if profile.is_uniform_step:
        shape = f"uniform step on [{profile.support}]"
    elif profile.two_level is not None:
        t = profile.two_level
        shape = (
            f"two-level b={t.b}, lambda={t.lam:.6f}, gamma_a={t.gamma_a:.6f}, "
            f"normalization {'holds' if t.normalization_holds else 'off'}"
        )
    else:
        shape = f"unstructured on [{profile.support}]"
    return f"a={result.a}: N*={result.n_star}, {shape}, mu={profile.mu:.6f}"


def run(args: argparse.Namespace, run_config: RunConfig) -> int:
    config = build_config(args, run_config)
    if args.all_a:
        summary = anneal_all(args.n, args.k, config)
        lines = [_describe(r) for r in summary.results]
        lines.append(
            f"best a={summary.best_a}: N*={summary.n_star}, "
            f"p_conjectured={summary.p_conjectured}, reached={summary.reached}"
        )
        emit(args, summary, "\n".join(lines))
        return EXIT_VIOLATION if summary.n_star > summary.p_conjectured else EXIT_OK
    if args.a is None:
        raise UsageError("optimize needs --a or --all-a")
    result = anneal_optimize(args.n, args.k, args.a, config)
    target = p_conjectured(args.n, args.k).value
    emit(args, result, f"{_describe(result)}\np_conjectured={target}")
    return EXIT_VIOLATION if result.n_star > target else EXIT_OK
