"""LSB-first bit streams over little-endian 64-bit words.

A BitBuffer owns a numpy ``uint64`` array with at least one zeroed guard
word past the logical end, so kernels may peek 64 bits at any valid
position without bounds checks. gamma_put/delta_put encode x >= 1; callers
that need 0 shift their values before encoding.
"""

import numpy as np

from . import kernels as K

MASK64 = (1 << 64) - 1


def words_for(nbits):
    """Word count incl. guard for a stream of nbits."""
    return (nbits + 63) // 64 + 1


class BitBuffer:
    __slots__ = ("words", "nbits", "_frozen")

    def __init__(self, capacity_bits=0):
        self.words = np.zeros(words_for(capacity_bits), dtype=np.uint64)
        self.nbits = 0
        self._frozen = False

    @classmethod
    def from_words(cls, words, nbits):
        buf = cls.__new__(cls)
        buf.words = words
        buf.nbits = nbits
        buf._frozen = True
        return buf

    def __len__(self):
        return self.nbits

    def _grow(self, add):
        need = words_for(self.nbits + add)
        if need > len(self.words):
            w = np.zeros(max(need, 2 * len(self.words)), dtype=np.uint64)
            w[: len(self.words)] = self.words
            self.words = w

    def write_bits(self, value, width):
        if self._frozen:
            raise ValueError("buffer is frozen")
        if not 0 <= width <= 64:
            raise ValueError("width must be in 0..64")
        if value < 0 or value >> width:
            raise ValueError(f"value {value} does not fit in {width} bits")
        self._grow(width)
        K.write_bits(self.words, self.nbits, value, width)
        self.nbits += width

    def read_bits(self, pos, width):
        if pos + width > self.nbits:
            raise EOFError("read past end of stream")
        return int(K.read_bits(self.words, pos, width))

    def freeze(self):
        """Trim to size and make immutable (builders call this once done)."""
        self.words = self.words[: words_for(self.nbits)].copy()
        self._frozen = True
        return self

    def reader(self, pos=0):
        return BitReader(self, pos)


class BitReader:
    """Cheap cursor over a BitBuffer; copy by constructing a new one."""

    __slots__ = ("buf", "pos")

    def __init__(self, buf, pos=0):
        self.buf = buf
        self.pos = pos

    def read_bits(self, width):
        v = self.buf.read_bits(self.pos, width)
        self.pos += width
        return v


def gamma_put(buf, x):
    """Append gamma(x): unary length, then the trailing bits of x. x >= 1."""
    if x < 1 or x > MASK64:
        raise ValueError("gamma encodes 1 <= x < 2**64")
    bl = x.bit_length()
    buf.write_bits(1 << (bl - 1), bl)
    buf.write_bits(x & ((1 << (bl - 1)) - 1), bl - 1)


def gamma_get(reader):
    bl = 1
    while reader.read_bits(1) == 0:
        bl += 1
    return (1 << (bl - 1)) | reader.read_bits(bl - 1)


def delta_put(buf, x):
    """Append delta(x): gamma of the length, then trailing bits. x >= 1."""
    if x < 1 or x > MASK64:
        raise ValueError("delta encodes 1 <= x < 2**64")
    bl = x.bit_length()
    gamma_put(buf, bl)
    buf.write_bits(x & ((1 << (bl - 1)) - 1), bl - 1)


def delta_get(reader):
    bl = gamma_get(reader)
    return (1 << (bl - 1)) | reader.read_bits(bl - 1)


def gamma_bit_length(x):
    return 2 * x.bit_length() - 1


def delta_bit_length(x):
    bl = x.bit_length()
    return bl - 1 + gamma_bit_length(bl)
