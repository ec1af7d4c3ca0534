"""Sparse bitvector over a universe of n bits with r ones.

Positions are split into a low part of width l = max(0, floor(log2(n/r)))
stored verbatim and a high part stored in unary: bucket j contributes its
ones followed by a single zero, so the high array has r + B bits where
B = ((n-1) >> l) + 1 is the bucket count. Select samples record the bit
position of every 64th one (for select1) and every 64th bucket terminator
(for rank1's zero-guided scan).

The high array's tail, past the last real bit, is padded with ones so the
kernel zero-scan in rank1 cannot run off the end; dense rank directories
elsewhere in the package pad with zeros instead.
"""

import numpy as np

from . import kernels as K
from .bitio import words_for

SELECT_STRIDE = 64


def _tail_ones(words, nbits):
    """Set every bit from nbits to the end of the word array."""
    w = nbits >> 6
    b = nbits & 63
    if b:
        words[w] |= np.uint64(((1 << 64) - 1) ^ ((1 << b) - 1))
        w += 1
    if w < len(words):
        words[w:] = np.uint64((1 << 64) - 1)


class SparseBitvector:
    __slots__ = (
        "n", "r", "low_width", "nbuckets", "high_len",
        "low", "high", "sel1", "sel0",
    )

    def __init__(self, positions, n):
        pos = np.asarray(positions, dtype=np.uint64)
        self.n = int(n)
        self.r = len(pos)
        if self.r:
            if int(pos[-1]) >= self.n:
                raise ValueError("position out of universe")
            if self.r > 1 and not (pos[1:] > pos[:-1]).all():
                raise ValueError("positions must be strictly increasing")
        if self.r == 0 or self.r == self.n:
            # Degenerate all-zero / all-one vectors: queries are arithmetic,
            # nothing is stored beyond n and r.
            self.low_width = 0
            self.nbuckets = 0
            self.high_len = 0
            self.low = _DUMMY
            self.high = _DUMMY
            self.sel1 = _DUMMY
            self.sel0 = _DUMMY
            return

        l = max(0, (self.n // self.r).bit_length() - 1)
        self.low_width = l
        buckets = pos >> np.uint64(l)
        self.nbuckets = ((self.n - 1) >> l) + 1
        self.high_len = self.r + self.nbuckets

        onepos = np.arange(self.r, dtype=np.uint64) + buckets
        high = np.zeros(words_for(self.high_len), dtype=np.uint64)
        np.bitwise_or.at(high, onepos >> np.uint64(6),
                         np.uint64(1) << (onepos & np.uint64(63)))
        _tail_ones(high, self.high_len)
        self.high = high

        if l:
            low = np.zeros(words_for(self.r * l), dtype=np.uint64)
            K.pack_fixed_into(pos & np.uint64((1 << l) - 1), l, low, 0)
            self.low = low
        else:
            self.low = _DUMMY

        k1 = np.arange(0, self.r, SELECT_STRIDE, dtype=np.uint64)
        self.sel1 = (k1 + buckets[k1.astype(np.int64)]).astype(np.uint64)
        j = np.arange(0, self.nbuckets, SELECT_STRIDE, dtype=np.uint64)
        # zero number j sits after all ones of buckets <= j
        self.sel0 = (j + np.searchsorted(buckets, j, side="right")).astype(np.uint64)

    def rank1(self, i):
        """Number of ones in positions [0, i)."""
        if not 0 <= i <= self.n:
            raise IndexError("rank argument out of range")
        if self.r == 0:
            return 0
        if self.r == self.n:
            return i
        if i == self.n:
            return self.r
        hb = i >> self.low_width
        lo = i & ((1 << self.low_width) - 1)
        return K.ef_rank1(self.high, self.sel0, self.low, self.low_width, hb, lo)

    def select1(self, k):
        """Position of the k-th one, k in [0, r)."""
        if not 0 <= k < self.r:
            raise IndexError("select argument out of range")
        if self.r == self.n:
            return k
        return K.ef_select1(self.high, self.sel1, self.low, self.low_width, k)

    def successor(self, i):
        """Smallest set position >= i, or None."""
        if not 0 <= i <= self.n:
            raise IndexError("successor argument out of range")
        k = self.rank1(i)
        if k == self.r:
            return None
        return self.select1(k)

    def __len__(self):
        return self.n

    def positions(self):
        """All set positions as a uint64 array (vectorized reconstruction)."""
        if self.r == 0:
            return np.zeros(0, np.uint64)
        if self.r == self.n:
            return np.arange(self.n, dtype=np.uint64)
        bits = np.unpackbits(self.high.view(np.uint8), bitorder="little")
        onepos = np.flatnonzero(bits[:self.high_len]).astype(np.uint64)
        buckets = onepos - np.arange(self.r, dtype=np.uint64)
        out = buckets << np.uint64(self.low_width)
        if self.low_width:
            low = np.empty(self.r, np.uint64)
            K.unpack_fixed_run(self.low, 0, self.low_width, self.r, low)
            out |= low
        return out

    def size_bits(self):
        """(low_bits, high_bits, sample_bits) actually addressed."""
        low = self.r * self.low_width
        high = self.high_len
        samples = (len(self.sel1) + len(self.sel0)) * 64
        if self.r == 0 or self.r == self.n:
            samples = 0
        return low, high, samples

    # serialization hooks (component = (nbits, uint64 array))

    def components(self):
        return [
            (self.r * self.low_width, self.low),
            (self.high_len, self.high),
            (len(self.sel1) * 64, self.sel1),
            (len(self.sel0) * 64, self.sel0),
        ]

    @classmethod
    def from_components(cls, n, r, low, high, sel1, sel0):
        v = cls.__new__(cls)
        v.n = n
        v.r = r
        if r == 0 or r == n:
            v.low_width = 0
            v.nbuckets = 0
            v.high_len = 0
            v.low = _DUMMY
            v.high = _DUMMY
            v.sel1 = _DUMMY
            v.sel0 = _DUMMY
            return v
        v.low_width = max(0, (n // r).bit_length() - 1)
        v.nbuckets = ((n - 1) >> v.low_width) + 1
        v.high_len = r + v.nbuckets
        if len(high) < words_for(v.high_len):
            high = np.concatenate(
                [high, np.zeros(words_for(v.high_len) - len(high), np.uint64)])
        _tail_ones(high, v.high_len)
        v.high = high
        v.low = low if v.low_width else _DUMMY
        v.sel1 = sel1
        v.sel0 = sel0
        return v


_DUMMY = np.zeros(1, dtype=np.uint64)
