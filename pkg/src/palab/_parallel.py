"""Chunked execution whose merged result never depends on the worker count."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Optional, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def chunk_ranges(length: int, parts: int) -> list[range]:
    parts = max(1, min(parts, length)) if length else 1
    step, extra = divmod(length, parts)
    out, start = [], 0
    for k in range(parts):
        stop = start + step + (1 if k < extra else 0)
        out.append(range(start, stop))
        start = stop
    return out


def ordered_map(fn: Callable[[T], R], items: Sequence[T], workers: int = 1) -> list[R]:
    """``[fn(x) for x in items]``, possibly on a thread pool; order is preserved."""
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def first_hit(
    fn: Callable[[range], Optional[R]], length: int, workers: int = 1
) -> Optional[R]:
    """Earliest non-None result of ``fn`` over contiguous chunks of ``range(length)``.

    ``fn`` must return the first hit inside its chunk, so the earliest chunk
    with a hit holds the global first hit.
    """
    results = ordered_map(fn, chunk_ranges(length, workers), workers)
    for r in results:
        if r is not None:
            return r
    return None


def flatten(chunks: Iterable[list[T]]) -> list[T]:
    return [x for c in chunks for x in c]
