"""Small shared helpers."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List


def parallel_map(fn: Callable, items: Iterable, threads: int) -> List:
    """Order-preserving map, optionally on a thread pool.

    Results are joined in submission order, so the output is identical
    for any thread count; the compiled query kernel drops the GIL, which
    is what makes worker threads worthwhile.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))
