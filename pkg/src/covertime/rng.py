"""Seeded, splittable random streams and deterministic chunked fan-out.

Every Monte Carlo routine takes a ``seed`` (an ``int`` or a
``numpy.random.SeedSequence``).  Work of ``n`` trials is cut into fixed-size
chunks; chunk ``i`` draws from the child stream ``(entropy, key + (i,))``.
Chunk boundaries never depend on the worker count, so results are
bit-identical for any ``workers`` value.
"""

from __future__ import annotations

import zlib
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar, Union

import numpy as np

SeedLike = Union[int, np.random.SeedSequence]
T = TypeVar("T")

DEFAULT_CHUNK = 2000


def as_seed_sequence(seed: SeedLike) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if isinstance(seed, (int, np.integer)) and seed >= 0:
        return np.random.SeedSequence(int(seed))
    raise TypeError(f"seed must be a non-negative int or SeedSequence, got {seed!r}")


def _label_key(label: Union[int, str]) -> int:
    if isinstance(label, str):
        return zlib.crc32(label.encode("utf-8"))
    return int(label)


def substream(seed: SeedLike, *labels: Union[int, str]) -> np.random.SeedSequence:
    """Child stream addressed by a path of labels (strings are hashed with CRC32)."""
    ss = as_seed_sequence(seed)
    key = tuple(ss.spawn_key) + tuple(_label_key(lab) for lab in labels)
    return np.random.SeedSequence(ss.entropy, spawn_key=key)


def generator(seed: SeedLike, *labels: Union[int, str]) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(substream(seed, *labels)))


def chunk_bounds(n: int, chunk_size: int = DEFAULT_CHUNK) -> list[tuple[int, int]]:
    if n < 0:
        raise ValueError("n must be non-negative")
    if chunk_size < 1:
        raise ValueError("chunk_size must be positive")
    return [(lo, min(lo + chunk_size, n)) for lo in range(0, n, chunk_size)]


def run_chunks(
    fn: Callable[[int, np.random.Generator], T],
    n: int,
    seed: SeedLike,
    *,
    chunk_size: int = DEFAULT_CHUNK,
    workers: int = 1,
) -> list[T]:
    """Apply ``fn(count, rng)`` to each chunk and return results in chunk order."""
    bounds = chunk_bounds(n, chunk_size)
    jobs = [(hi - lo, generator(seed, i)) for i, (lo, hi) in enumerate(bounds)]
    if workers <= 1 or len(jobs) <= 1:
        return [fn(count, rng) for count, rng in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: fn(*job), jobs))


def concat_chunks(parts: Sequence[np.ndarray]) -> np.ndarray:
    if not parts:
        return np.empty(0)
    return np.concatenate(parts, axis=0)
