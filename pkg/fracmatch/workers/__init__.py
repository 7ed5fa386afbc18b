"""Long-running sweep orchestration."""

from fracmatch.workers.ledger import LedgerStore
from fracmatch.workers.sweep_worker import SweepWorker, run_sweep

__all__ = [
    "LedgerStore",
    "SweepWorker",
    "run_sweep",
]
