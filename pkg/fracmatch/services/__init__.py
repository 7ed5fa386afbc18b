"""Service layer: formulas, sweep checks, oracles, smoothing and the constant audit."""

from fracmatch.services.arrangement_service import brute_force_p, brute_force_q
from fracmatch.services.bounds_service import build_report, lower_sum_checks
from fracmatch.services.formula_service import p_conjectured, q_conjectured, summarize
from fracmatch.services.hull_service import count_U, has_pfm, verify_certificate
from fracmatch.services.selftest_service import run_selftest
from fracmatch.services.smooth_service import anneal_all, anneal_optimize, count_N
from fracmatch.services.sweep_service import verify_cell, verify_cell_filtered

__all__ = [
    "anneal_all",
    "anneal_optimize",
    "brute_force_p",
    "brute_force_q",
    "build_report",
    "count_N",
    "count_U",
    "has_pfm",
    "lower_sum_checks",
    "p_conjectured",
    "q_conjectured",
    "run_selftest",
    "summarize",
    "verify_cell",
    "verify_cell_filtered",
    "verify_certificate",
]
