"""Sweep worker: shards n values over a process pool and feeds one ledger writer."""

import asyncio
from collections import Counter
from collections.abc import AsyncIterator
from concurrent.futures import ProcessPoolExecutor
from contextlib import aclosing

import psutil
from loguru import logger
from tqdm import tqdm

from fracmatch.core.errors import SweepInterrupted
from fracmatch.schemas.sweep import ShardResult, SweepConfig, SweepSummary
from fracmatch.services.sweep_service import sweep_row
from fracmatch.workers.ledger import LedgerStore


class SweepWorker:
    """Runs one sweep to completion or to a resumable stop."""

    def __init__(self, config: SweepConfig):
        self.config = config
        self.store = LedgerStore(config.out_path, config.checkpoint_path)
        self._pool: ProcessPoolExecutor | None = None
        self._process = psutil.Process()
        self._paths: Counter[str] = Counter()
        self._cells = 0
        self._shards = 0

    async def start(self) -> None:
        """Open the ledger and, for several workers, the process pool."""
        self.store.open(self.config)
        if self.config.workers > 1:
            self._pool = ProcessPoolExecutor(max_workers=self.config.workers)
        logger.info(
            f"Sweep started: n in [{self.config.n_min}, {self.config.n_max}], "
            f"k rule {self.config.k_rule.value}, {self.config.workers} worker(s)"
        )

    async def stop(self) -> None:
        """Shut the pool down, dropping shards not yet started."""
        if self._pool is not None:
            self._pool.shutdown(wait=True, cancel_futures=True)
            self._pool = None
        logger.info(f"Sweep stopped after {self._shards} shard(s) in this run")

    def pending(self) -> list[int]:
        done = self.store.completed
        return [n for n in range(self.config.n_min, self.config.n_max + 1) if n not in done]

    def _args(self, n: int) -> tuple:
        return (n, self.config.k_values(n), self.config.filter_slack_bits, self.config.exact_only)

    async def _results(self, todo: list[int]) -> AsyncIterator[ShardResult]:
        """Shards in completion order; in-process shards run one at a time in n order."""
        if self._pool is None:
            for n in todo:
                yield sweep_row(*self._args(n))
                await asyncio.sleep(0)
            return
        loop = asyncio.get_running_loop()
        futures = [loop.run_in_executor(self._pool, sweep_row, *self._args(n)) for n in todo]
        try:
            for next_done in asyncio.as_completed(futures):
                yield await next_done
        finally:
            for future in futures:
                future.cancel()
            await asyncio.gather(*futures, return_exceptions=True)

    def _accept(self, shard: ShardResult) -> None:
        """Single writer: every shard passes through here."""
        self.store.append_shard(shard)
        self._shards += 1
        self._cells += sum(shard.path_counts.values())
        self._paths.update(shard.path_counts)
        rss_mb = self._process.memory_info().rss / 2**20
        logger.info(
            f"Shard n={shard.n} done: {len(shard.records)} records, "
            f"{len(shard.violations)} violations, rss {rss_mb:.1f} MiB"
        )

    def _summary(self, interrupted: bool) -> SweepSummary:
        checkpoint = self.store.checkpoint
        return SweepSummary(
            cells=self._cells,
            violations=list(checkpoint.violations) if checkpoint else [],
            records_written=self.store.records_written,
            shards_completed=self._shards,
            path_counts=dict(self._paths),
            interrupted=interrupted,
            out_path=str(self.store.out_path),
        )

    async def run(self) -> SweepSummary:
        """Run the sweep (blocking).

        Raises SweepInterrupted after ``stop_after`` shards or on an I/O failure;
        the checkpoint on disk then covers exactly the shards already written.
        """
        await self.start()
        todo = self.pending()
        bar = tqdm(total=len(todo), desc="sweep", unit="n", disable=not self.config.progress)
        try:
            async with aclosing(self._results(todo)) as results:
                async for shard in results:
                    try:
                        self._accept(shard)
                    except OSError as e:
                        logger.error(f"Ledger write failed at n={shard.n}: {e}")
                        raise SweepInterrupted(f"I/O failure at n={shard.n}: {e}") from e
                    bar.update(1)
                    stop_after = self.config.stop_after
                    if stop_after is not None and self._shards >= stop_after and self.pending():
                        logger.warning(f"Stopping after {self._shards} shard(s) as requested")
                        raise SweepInterrupted(f"stopped after {self._shards} shard(s)")
            self.store.finalize()
        except SweepInterrupted as e:
            e.summary = self._summary(interrupted=True)
            raise
        finally:
            bar.close()
            await self.stop()

        summary = self._summary(interrupted=False)
        if summary.violations:
            logger.error(f"Sweep found {len(summary.violations)} violation(s)")
        else:
            logger.info(f"Sweep clean: {summary.cells} cells, {summary.records_written} records")
        return summary


def run_sweep(config: SweepConfig) -> SweepSummary:
    """Synchronous entry point around SweepWorker.run()."""
    return asyncio.run(SweepWorker(config).run())
