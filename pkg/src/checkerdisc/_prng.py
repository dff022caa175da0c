"""SplitMix64, vectorized.

The i-th output (i = 0, 1, ...) for a 64-bit ``seed`` is::

    z = seed + (i + 1) * 0x9E3779B97F4A7C15          (mod 2**64)
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9         (mod 2**64)
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB         (mod 2**64)
    z =  z ^ (z >> 31)

which is the standard SplitMix64 stream started at state ``seed``. Being
counter-based, any prefix can be produced in one numpy pass and the output
is bit-identical to any other implementation of the same recurrence.
"""

from __future__ import annotations

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
MASK64 = (1 << 64) - 1


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def splitmix64(seed: int, count: int) -> np.ndarray:
    """First ``count`` outputs of the SplitMix64 stream for ``seed``."""
    seed = np.uint64(int(seed) & MASK64)
    with np.errstate(over="ignore"):
        idx = np.arange(1, count + 1, dtype=np.uint64)
        return _mix(seed + idx * GOLDEN)


def derive_seed(*parts: int) -> int:
    """Fold several integers into one 64-bit seed (first output of each chained stream)."""
    state = 0
    for p in parts:
        state = int(splitmix64((state ^ (int(p) & MASK64)), 1)[0])
    return state


def random_signs(seed: int, count: int) -> np.ndarray:
    """+1/-1 array: -1 where the top bit of the SplitMix64 output is set."""
    top = splitmix64(seed, count) >> np.uint64(63)
    return (1 - 2 * top.astype(np.int64)).astype(np.int8)
