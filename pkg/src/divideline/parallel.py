"""Ordered fan-out over ensemble indices."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Iterator, TypeVar

T = TypeVar("T")

THREADS_ENV = "DIVIDELINE_THREADS"


def resolve_threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get(THREADS_ENV, "1") or 1)
    return max(1, int(threads))


def imap_ordered(fn: Callable[[int], T], indices: Iterable[int], threads: int | None = 1) -> Iterator[T]:
    """Yield ``fn(i)`` for each index, in index order, using up to ``threads`` workers.

    Consumers that fold results in the yielded order get bit-identical
    answers for any thread count.
    """
    threads = resolve_threads(threads)
    indices = list(indices)
    if threads == 1:
        for i in indices:
            yield fn(i)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        # bounded look-ahead keeps memory flat for long ensembles
        window = threads * 2
        pending = [pool.submit(fn, i) for i in indices[:window]]
        nxt = window
        while pending:
            fut = pending.pop(0)
            if nxt < len(indices):
                pending.append(pool.submit(fn, indices[nxt]))
                nxt += 1
            yield fut.result()
