"""Deterministic fan-out of independent solver tasks."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

__all__ = ["parallel_map", "default_workers"]


def default_workers() -> int:
    return min(os.cpu_count() or 1, 8)


def parallel_map(fn, items, workers: int = 1) -> list:
    """map() over a worker pool, preserving input order.

    Results come back in submission order regardless of completion order,
    so parallel and serial runs produce identical output streams.  Falls
    back to the serial path for a single worker or tiny batches.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    try:
        with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
            return list(pool.map(fn, items))
    except (OSError, PermissionError):
        return [fn(item) for item in items]
