"""Parallelism context handed from the CLI down to the numerical modules."""

from __future__ import annotations

import math
import os
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")


@dataclass(frozen=True, slots=True)
class ParallelContext:
    """Worker count and reduction policy.

    ``map_ordered`` always returns results in input order, so reports do not
    depend on scheduling. ``deterministic`` additionally switches sums to an
    exactly rounded ordered reduction.

    Example:
        >>> ctx = ParallelContext(workers=1, deterministic=True)
        >>> ctx.map_ordered(lambda x: x * x, [1, 2, 3])
        [1, 4, 9]
        >>> ctx.reduce_sum([0.1] * 10)
        1.0
    """

    workers: int = 1
    deterministic: bool = False

    @classmethod
    def all_cores(cls, *, deterministic: bool = False) -> ParallelContext:
        return cls(workers=os.cpu_count() or 1, deterministic=deterministic)

    def map_ordered(self, fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
        materialized = list(items)
        if self.workers <= 1 or len(materialized) <= 1:
            return [fn(item) for item in materialized]
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(fn, materialized))

    def reduce_sum(self, values: Sequence[float] | np.ndarray) -> float:
        if self.deterministic:
            return math.fsum(np.asarray(values, dtype=float).ravel().tolist())
        return float(np.sum(values))


SEQUENTIAL = ParallelContext(workers=1, deterministic=True)


__all__ = ["SEQUENTIAL", "ParallelContext"]
