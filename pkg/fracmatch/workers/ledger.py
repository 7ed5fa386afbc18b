"""Single-writer store for the sweep ledger (JSONL) and its checkpoint (JSON)."""

import json
import os
import tempfile
from pathlib import Path

from loguru import logger

from fracmatch.core.errors import CheckpointMismatchError
from fracmatch.schemas.sweep import CHECKPOINT_VERSION, Checkpoint, ShardResult, SweepConfig, SweepRecord


def atomic_write_text(path: Path, text: str) -> None:
    """Write via a temporary file in the same directory, then rename over the target."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def record_line(record: SweepRecord) -> str:
    return record.model_dump_json() + "\n"


def read_records(path: Path) -> list[SweepRecord]:
    """Every record of a ledger file; missing file reads as empty."""
    if not path.exists():
        return []
    records = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                records.append(SweepRecord.model_validate_json(line))
    return records


class LedgerStore:
    """Owns the ledger and checkpoint files of one sweep.

    Records of an n are appended before the checkpoint lists that n, so a crash
    in between leaves extra records that the next resume discards.
    """

    def __init__(self, out_path: str | Path, checkpoint_path: str | Path):
        self.out_path = Path(out_path)
        self.checkpoint_path = Path(checkpoint_path)
        self.checkpoint: Checkpoint | None = None
        self.records_written = 0

    @property
    def completed(self) -> set[int]:
        return set(self.checkpoint.completed_n) if self.checkpoint else set()

    def load_checkpoint(self) -> Checkpoint | None:
        if not self.checkpoint_path.exists():
            return None
        data = json.loads(self.checkpoint_path.read_text(encoding="utf-8"))
        return Checkpoint.model_validate(data)

    def open(self, config: SweepConfig) -> Checkpoint:
        """Start fresh, or resume from an existing checkpoint when config.resume is set."""
        digest = config.digest()
        existing = self.load_checkpoint() if config.resume else None
        if existing is None:
            if config.resume:
                logger.warning(f"No checkpoint at {self.checkpoint_path}; starting fresh")
            self.checkpoint = Checkpoint(config_digest=digest)
            atomic_write_text(self.out_path, "")
            self._write_checkpoint()
            return self.checkpoint

        if existing.version != CHECKPOINT_VERSION:
            raise CheckpointMismatchError(
                f"checkpoint version {existing.version}, expected {CHECKPOINT_VERSION}"
            )
        if existing.config_digest != digest:
            raise CheckpointMismatchError(
                f"checkpoint digest {existing.config_digest[:12]} does not match "
                f"config digest {digest[:12]}"
            )
        done = set(existing.completed_n)
        kept = [r for r in read_records(self.out_path) if r.n in done]
        atomic_write_text(self.out_path, "".join(record_line(r) for r in kept))
        self.checkpoint = existing
        logger.info(
            f"Resuming sweep: {len(done)} n values complete, {len(kept)} records kept"
        )
        return existing

    def append_shard(self, shard: ShardResult) -> None:
        """Append one n's records, then advance the checkpoint."""
        if self.checkpoint is None:
            raise RuntimeError("LedgerStore.open() was not called")
        with open(self.out_path, "a", encoding="utf-8") as f:
            for record in shard.records:
                f.write(record_line(record))
            f.flush()
            os.fsync(f.fileno())
        self.records_written += len(shard.records)
        completed = sorted(self.completed | {shard.n})
        violations = sorted(set(self.checkpoint.violations) | set(shard.violations))
        self.checkpoint = self.checkpoint.model_copy(
            update={"completed_n": completed, "violations": violations}
        )
        self._write_checkpoint()
        logger.debug(f"Checkpoint advanced to {len(completed)} completed n values")

    def finalize(self) -> int:
        """Rewrite the ledger in canonical (n, k) order; returns the record count."""
        records = sorted(read_records(self.out_path), key=lambda r: (r.n, r.k))
        atomic_write_text(self.out_path, "".join(record_line(r) for r in records))
        logger.info(f"Ledger {self.out_path} finalized with {len(records)} records")
        return len(records)

    def _write_checkpoint(self) -> None:
        assert self.checkpoint is not None
        atomic_write_text(
            self.checkpoint_path,
            json.dumps(self.checkpoint.model_dump(mode="json"), sort_keys=True) + "\n",
        )
