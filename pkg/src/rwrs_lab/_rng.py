"""Seed bookkeeping shared by every simulator.

Each replicate gets its own generator built from ``(master seed, label,
replicate index, stream tag)`` so that results never depend on the order in
which replicates are run.
"""
from __future__ import annotations

import os
import zlib
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np

T = TypeVar("T")

# stream tags
WALK = 0
SCENERY = 1
BROWNIAN = 2
NOISE_POS = 3
NOISE_NEG = 4
MISC = 5


def label_key(label: str) -> int:
    return zlib.crc32(label.encode("utf8"))


def stream(seed: int, index: int = 0, tag: int = MISC, label: str = "") -> np.random.Generator:
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF, label_key(label), int(index), int(tag)]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def sub_seed(seed: int, label: str) -> int:
    """Derive a reproducible child master seed for a named sub-experiment."""
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, label_key(label)])
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def default_threads() -> int:
    return os.cpu_count() or 1


def parallel_map(func: Callable[[int], T], indices: Iterable[int], threads: int | None = None) -> list[T]:
    """Map ``func`` over replicate indices, preserving order."""
    indices = list(indices)
    threads = default_threads() if threads is None else max(1, int(threads))
    if threads == 1 or len(indices) < 2:
        return [func(i) for i in indices]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, indices))


def floor_times(n: int, times: Sequence[float]) -> np.ndarray:
    """Integer indices ``[n t]`` with a guard against float round-off."""
    return np.floor(np.asarray(times, dtype=float) * n + 1e-9).astype(np.int64)
