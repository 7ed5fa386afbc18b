"""Exact binomial coefficients with a per-worker memo table."""

import math
from functools import lru_cache

BigCount = int

# Rows at n ~ 1e5 hold ~1e5-bit integers; keep the table bounded.
DEFAULT_MEMO_LIMIT = 200_000


class BinomialCache:
    """Memoized C(n, k), keyed by (n, min(k, n - k)).

    One instance per worker process; instances are never shared between
    processes, so no locking is needed.
    """

    def __init__(self, limit: int = DEFAULT_MEMO_LIMIT):
        self.limit = limit
        self._table: dict[tuple[int, int], BigCount] = {}
        self.hits = 0
        self.misses = 0

    def get(self, n: int, k: int) -> BigCount:
        """C(n, k); 0 when k < 0 or k > n."""
        if n < 0:
            raise ValueError(f"binomial needs n >= 0, got n={n}")
        if k < 0 or k > n:
            return 0
        key = (n, min(k, n - k))
        value = self._table.get(key)
        if value is not None:
            self.hits += 1
            return value
        self.misses += 1
        value = math.comb(n, key[1])
        if len(self._table) >= self.limit:
            self._table.clear()
        self._table[key] = value
        return value

    def clear(self) -> None:
        self._table.clear()
        self.hits = 0
        self.misses = 0

    def __len__(self) -> int:
        return len(self._table)


@lru_cache
def get_binomial_cache() -> BinomialCache:
    """Process-wide default cache."""
    return BinomialCache()


def binomial(n: int, k: int, cache: BinomialCache | None = None) -> BigCount:
    """C(n, k) as an exact integer; C(n, 0) = 1 and C(n, k) = 0 for k > n."""
    if cache is None:
        cache = get_binomial_cache()
    return cache.get(n, k)
