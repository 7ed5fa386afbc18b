"""Tests for cell verification, the enclosure filter and the sweep worker."""

import json
import math
from collections.abc import Callable
from pathlib import Path

import pytest

from fracmatch.arith import BinomialCache
from fracmatch.core.errors import CheckpointMismatchError, PreconditionError, SweepInterrupted
from fracmatch.schemas.sweep import CellPath, KRule, SweepConfig
from fracmatch.services import sweep_service
from fracmatch.services.formula_service import tail_sum_strict
from fracmatch.services.sweep_service import (
    audit_filter,
    random_cells,
    sweep_row,
    tail_range,
    tail_terms,
    term_run,
    verify_cell,
    verify_cell_filtered,
)
from fracmatch.workers.ledger import LedgerStore, read_records
from fracmatch.workers.sweep_worker import SweepWorker, run_sweep


def test_verify_cell_equality():
    """Test the cell a = n - 1, where both sides coincide."""
    verdict = verify_cell(13, 3, 12)
    assert verdict.ok
    assert verdict.lhs == verdict.rhs == 220
    assert verdict.equality
    assert verdict.margin_log2 == 0.0


def test_verify_cell_strict_inequality():
    """Test an in-scope cell with room to spare."""
    verdict = verify_cell(13, 3, 4)
    assert verdict.ok
    assert (verdict.lhs, verdict.rhs) == (202, 220)
    assert verdict.margin_log2 > 0


def test_verify_cell_out_of_scope():
    """Test that k > n/4 is evaluated but flagged, and may violate."""
    verdict = verify_cell(10, 3, 3)
    assert not verdict.in_scope
    assert not verdict.ok
    assert (verdict.lhs, verdict.rhs) == (85, 84)


def test_verify_cell_rejects_bad_cells():
    """Test the domain check."""
    with pytest.raises(PreconditionError):
        verify_cell(10, 3, 10)
    with pytest.raises(PreconditionError):
        verify_cell(10, 0, 3)


def test_term_recurrence_matches_direct(cache: BinomialCache, rng):
    """Test the ratio recurrence against direct products of binomials."""
    for _ in range(200):
        n = rng.randint(4, 300)
        k = rng.randint(1, n - 1)
        a = rng.randint(1, n - 1)
        lo, hi = tail_range(n, k, a)
        direct = [math.comb(a, i) * math.comb(n - a, k - i) for i in range(lo, hi + 1)]
        assert tail_terms(n, k, a, cache) == direct
        assert sum(direct) == tail_sum_strict(n, k, a, cache)


@pytest.mark.slow
def test_term_recurrence_ten_thousand_cells(cache: BinomialCache, rng):
    """Test the ratio recurrence on 10000 random cells with n <= 1000."""
    for _ in range(10000):
        n = rng.randint(4, 1000)
        k = rng.randint(1, n - 1)
        a = rng.randint(1, n - 1)
        lo, hi = tail_range(n, k, a)
        direct = [math.comb(a, i) * math.comb(n - a, k - i) for i in range(lo, hi + 1)]
        assert tail_terms(n, k, a, cache) == direct


def test_term_run_clips_to_nonzero_range():
    """Test that a run outside the support is empty and partial runs are clipped."""
    assert term_run(10, 2, 3, 3, 5) == []
    assert term_run(10, 2, 3, 0, 9) == [math.comb(7, 2), 3 * 7, 3]


def test_filtered_matches_exact_on_large_cells():
    """Test that the filter reaches the exact verdict on representative cells."""
    for n, k, a in [(2000, 499, 1000), (2000, 499, 1), (3000, 700, 1500)]:
        filtered = verify_cell_filtered(n, k, a)
        assert filtered.ok == verify_cell(n, k, a).ok
        assert filtered.path in (CellPath.CRUDE, CellPath.REFINED)


def test_filtered_falls_back_on_equality():
    """Test that an exact tie can only be decided in exact arithmetic."""
    verdict = verify_cell_filtered(2000, 499, 1999)
    assert verdict.path is CellPath.EXACT
    assert verdict.ok
    assert verdict.equality


def test_audit_filter_no_disagreements():
    """Test the filter against exact arithmetic on a seeded sample."""
    audit = audit_filter(random_cells(300, 200, seed=1))
    assert audit.cells == 300
    assert audit.disagreements == []
    assert sum(audit.path_counts.values()) == 300


def test_filter_reports_known_violation():
    """Test that the filter refuses the cell (10,3,3), where 85 > 84."""
    exact = verify_cell(10, 3, 3)
    filtered = verify_cell_filtered(10, 3, 3)
    assert not exact.ok
    assert (exact.lhs, exact.rhs) == (85, 84)
    assert not exact.in_scope
    assert not filtered.ok
    assert filtered.path is CellPath.EXACT


def test_filter_agrees_on_every_small_cell():
    """Test filtered and exact verdicts on every cell with n < 25, k > n/4 included."""
    violating = 0
    for n in range(4, 25):
        for k in range(1, n):
            for a in range(1, n):
                exact = verify_cell(n, k, a)
                assert verify_cell_filtered(n, k, a).ok == exact.ok, (n, k, a)
                violating += not exact.ok
    assert violating > 0


def test_audit_filter_full_range_counts_violations():
    """Test an audit that samples k up to n - 1 and meets violating cells."""
    cells = random_cells(300, 60, seed=1, full_range=True)
    assert any(4 * k > n for n, k, _ in cells)
    audit = audit_filter(cells)
    assert audit.violations > 0
    assert audit.disagreements == []


def test_audit_filter_catches_optimistic_filter(monkeypatch: pytest.MonkeyPatch):
    """Test that a filter answering ok everywhere shows up as disagreements."""
    def always_ok(n: int, k: int, a: int, *args, **kwargs):
        return verify_cell(13, 3, 4)

    monkeypatch.setattr(sweep_service, "verify_cell_filtered", always_ok)
    audit = audit_filter(random_cells(300, 60, seed=1, full_range=True))
    assert len(audit.disagreements) == audit.violations > 0


def test_random_cells_deterministic_and_in_scope():
    """Test that sampling is seeded and respects k <= n/4."""
    cells = random_cells(50, 100, seed=7)
    assert cells == random_cells(50, 100, seed=7)
    for n, k, a in cells:
        assert 4 * k <= n
        assert 1 <= a <= n - 1


def test_sweep_row_records():
    """Test one shard: every record is clean and a = n - 1 is an equality."""
    shard = sweep_row(13, [1, 2, 3])
    assert shard.n == 13
    assert [r.k for r in shard.records] == [1, 2, 3]
    assert shard.violations == []
    for record in shard.records:
        assert record.ok
        assert 12 in record.equality_as
    assert sum(shard.path_counts.values()) == 3 * 12


def test_sweep_row_filtered_agrees_with_exact_only():
    """Test that the filter does not change verdicts or equality sets."""
    filtered = sweep_row(60, list(range(1, 16)))
    exact = sweep_row(60, list(range(1, 16)), exact_only=True)
    assert [(r.ok, r.equality_as) for r in filtered.records] == [
        (r.ok, r.equality_as) for r in exact.records
    ]
    assert exact.path_counts == {"exact": 15 * 59}


def test_sweep_config_validation_and_k_rules():
    """Test the k rules and the cross-field checks."""
    quarter = SweepConfig(n_max=20)
    assert quarter.k_values(20) == [1, 2, 3, 4, 5]
    band = SweepConfig(n_max=100, k_rule=KRule.BAND)
    assert band.k_values(100) == list(range(21, 25))
    explicit = SweepConfig(n_max=10, k_rule=KRule.EXPLICIT, k_list=[3, 1, 12])
    assert explicit.k_values(10) == [1, 3]
    with pytest.raises(ValueError):
        SweepConfig(n_min=10, n_max=5)
    with pytest.raises(ValueError):
        SweepConfig(n_max=10, k_rule=KRule.EXPLICIT)
    with pytest.raises(ValueError):
        SweepConfig(n_max=10, bogus=1)


def test_sweep_config_digest():
    """Test that the digest covers ledger-shaping fields only."""
    base = SweepConfig(n_max=50)
    assert base.digest() == SweepConfig(n_max=50, workers=4, stop_after=2).digest()
    assert base.digest() != SweepConfig(n_max=51).digest()
    assert base.digest() != SweepConfig(n_max=50, exact_only=True).digest()


@pytest.mark.asyncio
async def test_sweep_worker_clean_run(sweep_config: Callable[..., SweepConfig]):
    """Test a full in-process sweep and its ledger."""
    config = sweep_config()
    summary = await SweepWorker(config).run()

    assert summary.violations == []
    assert not summary.interrupted
    expected = sum(n // 4 for n in range(4, 41))
    assert summary.records_written == expected
    records = read_records(Path(config.out_path))
    assert len(records) == expected
    assert [(r.n, r.k) for r in records] == sorted((r.n, r.k) for r in records)
    for record in records:
        assert record.n - 1 in record.equality_as

    checkpoint = json.loads(Path(config.checkpoint_path).read_text())
    assert checkpoint["completed_n"] == list(range(2, 41))


def test_sweep_worker_count_independent(
    sweep_config: Callable[..., SweepConfig], tmp_path: Path
):
    """Test that one and two workers write byte-identical ledgers."""
    one = sweep_config(n_max=30, out_path=str(tmp_path / "one.jsonl"),
                       checkpoint_path=str(tmp_path / "one.json"))
    two = sweep_config(n_max=30, workers=2, out_path=str(tmp_path / "two.jsonl"),
                       checkpoint_path=str(tmp_path / "two.json"))
    run_sweep(one)
    run_sweep(two)
    assert Path(one.out_path).read_bytes() == Path(two.out_path).read_bytes()


def test_sweep_resume_matches_uninterrupted(
    sweep_config: Callable[..., SweepConfig], tmp_path: Path
):
    """Test that a stopped and resumed sweep writes the same ledger."""
    reference = sweep_config(n_max=30, out_path=str(tmp_path / "ref.jsonl"),
                             checkpoint_path=str(tmp_path / "ref.json"))
    run_sweep(reference)

    partial = sweep_config(n_max=30, stop_after=3)
    with pytest.raises(SweepInterrupted) as excinfo:
        run_sweep(partial)
    interrupted = excinfo.value.summary
    assert interrupted is not None
    assert interrupted.interrupted
    assert interrupted.shards_completed == 3
    checkpoint = json.loads(Path(partial.checkpoint_path).read_text())
    assert len(checkpoint["completed_n"]) == 3

    resumed = sweep_config(n_max=30, resume=True)
    summary = run_sweep(resumed)
    assert summary.shards_completed == 29 - 3
    assert Path(resumed.out_path).read_bytes() == Path(reference.out_path).read_bytes()


def test_resume_discards_records_past_checkpoint(sweep_config: Callable[..., SweepConfig]):
    """Test that ledger lines for n values missing from the checkpoint are dropped."""
    partial = sweep_config(n_max=20, stop_after=5)
    with pytest.raises(SweepInterrupted):
        run_sweep(partial)
    out = Path(partial.out_path)
    stray = sweep_row(19, [1, 2, 3, 4]).records[0].model_dump_json()
    out.write_text(out.read_text() + stray + "\n")

    store = LedgerStore(partial.out_path, partial.checkpoint_path)
    store.open(sweep_config(n_max=20, resume=True))
    kept = read_records(out)
    assert [r.n for r in kept] == [4, 5, 6]
    assert store.completed == {2, 3, 4, 5, 6}


def test_resume_digest_mismatch(sweep_config: Callable[..., SweepConfig]):
    """Test that resuming under a different configuration is refused."""
    with pytest.raises(SweepInterrupted):
        run_sweep(sweep_config(n_max=20, stop_after=1))
    with pytest.raises(CheckpointMismatchError):
        run_sweep(sweep_config(n_max=21, resume=True))


def test_resume_without_checkpoint_starts_fresh(sweep_config: Callable[..., SweepConfig]):
    """Test that --resume with no checkpoint runs the whole sweep."""
    summary = run_sweep(sweep_config(n_max=12, resume=True))
    assert summary.shards_completed == 11


@pytest.mark.slow
def test_desk_scale_exact_sweep(sweep_config: Callable[..., SweepConfig]):
    """Test exact verification of every cell up to n = 300."""
    summary = run_sweep(sweep_config(n_max=300, exact_only=True, workers=4))
    assert summary.violations == []


@pytest.mark.slow
def test_spot_shard_at_regime_start(rng):
    """Test the single row n = 120000, k = 29999 and re-check sampled cells exactly."""
    n, k = 120000, 29999
    shard = sweep_row(n, [k])
    assert shard.violations == []
    assert shard.records[0].ok
    assert n - 1 in shard.records[0].equality_as
    for a in rng.sample(range(1, n), 100):
        assert verify_cell(n, k, a).ok


@pytest.mark.slow
def test_filter_audit_large_sample():
    """Test the filter on a large seeded sample up to n = 1500."""
    audit = audit_filter(random_cells(5000, 1500, seed=3))
    assert audit.disagreements == []


@pytest.mark.slow
def test_filter_audit_acceptance_sample():
    """Test the filter on 100000 seeded cells, half of them over the full k range."""
    in_scope = audit_filter(random_cells(50000, 1500, seed=5))
    full = audit_filter(random_cells(50000, 1500, seed=6, full_range=True))
    assert in_scope.disagreements == []
    assert full.disagreements == []
    assert full.violations > 0
