"""Thread pool wrapper with an ordered map.

Results always come back in submission order, so reductions that combine
them stay deterministic for any worker count.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def resolve_threads(threads: int) -> int:
    """Map the configured thread count to a worker count (0 = one per CPU)."""
    if threads <= 0:
        return os.cpu_count() or 1
    return threads


class WorkerMap:
    """Ordered map over a thread pool; no pool at all when jobs <= 1."""

    def __init__(self, jobs: int) -> None:
        """Initialize worker map.

        Args:
            jobs: Number of worker threads (0 = one per CPU)
        """
        self.jobs = resolve_threads(jobs)

    def map(self, fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
        """Apply fn to every item, preserving order.

        Args:
            fn: Function to apply
            items: Inputs

        Returns:
            List of results in input order
        """
        if self.jobs <= 1:
            return [fn(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.jobs) as pool:
            return list(pool.map(fn, items))


def split_range(start: int, stop: int, parts: int) -> list[range]:
    """Split range(start, stop) into at most `parts` contiguous ranges."""
    total = max(stop - start, 0)
    parts = max(1, min(parts, total)) if total else 1
    bounds = [start + (total * k) // parts for k in range(parts + 1)]
    return [range(lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
