"""Deterministic 64-bit PRNG (splitmix-style).

The stream is fully specified so results reproduce across platforms and
backends: output t (counting from 0) is mix64(seed + (t+1) * GOLDEN) with
the usual xor-shift/multiply finalizer. Bounded draws use a plain modulo;
the bias is < bound / 2**64 and irrelevant for the bounds used here.
"""

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(z):
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Sequential form; ``splitmix_array(seed, n)`` yields the same stream."""

    __slots__ = ("_x",)

    def __init__(self, seed):
        self._x = seed & MASK64

    def next_u64(self):
        self._x = (self._x + GOLDEN) & MASK64
        return mix64(self._x)

    def below(self, bound):
        return self.next_u64() % bound


def splitmix_array(seed, count, start=0):
    """Outputs ``start .. start+count-1`` of the stream for ``seed``."""
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = np.uint64(seed & MASK64) + idx * np.uint64(GOLDEN)
    z ^= z >> np.uint64(30)
    z *= np.uint64(_MIX1)
    z ^= z >> np.uint64(27)
    z *= np.uint64(_MIX2)
    z ^= z >> np.uint64(31)
    return z
