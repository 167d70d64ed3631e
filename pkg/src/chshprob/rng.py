"""Counter-based random streams keyed on (seed, block index).

Trials are grouped into fixed-size blocks.  Block ``k`` draws from a Philox
generator whose key is the seed and whose counter starts at ``k`` in the top
word, so any block can be regenerated on its own, in any order, on any
worker, and yield the same numbers.
"""

from __future__ import annotations

import numpy as np

BLOCK_SIZE = 1 << 16


def block_generator(seed: int, block: int) -> np.random.Generator:
    if seed < 0:
        raise ValueError("seed must be non-negative")
    if block < 0:
        raise ValueError("block index must be non-negative")
    counter = np.array([0, 0, 0, block], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=seed, counter=counter))


def blocks(n: int, block_size: int = BLOCK_SIZE) -> list[tuple[int, int, int]]:
    """Split ``n`` items into (block index, start, stop) triples."""
    return [(k, start, min(start + block_size, n)) for k, start in enumerate(range(0, n, block_size))]


def stream(seed: int, index: int) -> np.random.Generator:
    """Independent generator for the ``index``-th randomized instance of a property run."""
    return block_generator(seed, index)
