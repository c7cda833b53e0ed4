"""
Worker pool for the exhaustive oracles: a stream of known length is cut into contiguous
index ranges, each range is processed by a top-level function, and results come back in
range order, so the output never depends on the worker count.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")


def partition(total: int, workers: int, per_worker: int = 4) -> list[tuple[int, int]]:
    """Split range(total) into about workers * per_worker contiguous chunks."""
    if total <= 0:
        return []
    pieces = max(1, min(total, workers * per_worker if workers > 1 else 1))
    size = -(-total // pieces)
    return [(start, min(start + size, total)) for start in range(0, total, size)]


def run_chunks(fn: Callable[[tuple], T], tasks: list[tuple], workers: int) -> list[T]:
    if workers <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    logger.debug("dispatching %d chunks to %d workers", len(tasks), workers)
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, tasks))
