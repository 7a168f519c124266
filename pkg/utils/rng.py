"""
Seeded random generators.

Philox is counter-based, so a (seed, stream...) key fixes the whole sequence
on every platform; extra stream integers give independent sub-streams.
"""

from typing import Union

import numpy as np

SeedLike = Union[int, np.random.Generator]


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Generator for `seed`, optionally split into a named sub-stream."""
    if seed < 0 or any(s < 0 for s in stream):
        raise ValueError(f"seeds must be non-negative, got {(seed, *stream)}")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), *map(int, stream)])))


def as_rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return make_rng(int(seed))
