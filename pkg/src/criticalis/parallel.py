"""Ordered process-pool map used by suites and scans."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Iterator, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def pmap(fn: Callable[[T], R], items: Iterable[T], jobs: int = 1, chunksize: int = 1) -> Iterator[R]:
    """Like map(fn, items) but spread over ``jobs`` processes; results keep input order."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        for x in items:
            yield fn(x)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(fn, items, chunksize=chunksize)
