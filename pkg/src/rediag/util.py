"""Shared helpers: per-item seed derivation and a deterministic parallel map."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")


def item_rng(seed: int, index: int) -> np.random.Generator:
    """Independent generator for item ``index`` of a seeded run."""
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


def parallel_map(fn: Callable[[int, T], R], items: Sequence[T], workers: int = 1) -> list[R]:
    """Map fn(index, item) over items, order-preserving regardless of workers."""
    if workers <= 1:
        return [fn(i, item) for i, item in enumerate(items)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(len(items)), items))
