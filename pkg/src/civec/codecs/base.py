"""Shared codec interface.

Every encoded vector answers access(i) -> (value, cursor); the cursor then
yields values i+1, i+2, ... via next() without repeating the positioned
decode. Differential ("_zz") variants store zigzag-mapped successive
differences plus one absolute 64-bit value per sample block, so access
costs at most one block of difference decodes.

Zigzag mapping sends d >= 0 to 2d and d < 0 to 2|d|-1; differences must
stay below 2**62 in magnitude.
"""

from dataclasses import dataclass

import numpy as np

from .. import kernels as K

MASK64 = (1 << 64) - 1
DEFAULT_SAMPLING = 128
PFD_DEFAULT_SAMPLING = 1024

_POW2 = np.left_shift(np.uint64(1), np.arange(64, dtype=np.uint64))


def bit_lengths(values):
    """Per-element bit_length as uint8 (0 for value 0)."""
    return np.searchsorted(_POW2, np.asarray(values, np.uint64),
                           side="right").astype(np.uint8)


def as_u64(values):
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise ValueError("expected a one-dimensional sequence")
    if arr.dtype == np.uint64:
        return arr
    if len(arr) == 0:
        return np.zeros(0, np.uint64)
    if arr.dtype.kind == "f" and not isinstance(values, np.ndarray):
        # lists holding ints above the int64 range arrive float-promoted;
        # redo the conversion per element so they are not silently rounded
        arr = np.asarray(values, dtype=object)
    if arr.dtype.kind == "f":
        raise ValueError("values must be integers")
    if arr.dtype.kind == "i":
        if len(arr) and int(arr.min()) < 0:
            raise ValueError("values must be non-negative")
        return arr.astype(np.uint64)
    if arr.dtype.kind == "u":
        return arr.astype(np.uint64)
    # object / python ints: range-check through int conversion
    out = np.empty(len(arr), np.uint64)
    for i, v in enumerate(arr):
        if not isinstance(v, (int, np.integer)):
            raise ValueError("values must be integers")
        v = int(v)
        if not 0 <= v <= MASK64:
            raise ValueError(f"value at index {i} outside uint64 range")
        out[i] = v
    return out


def zigzag_map(d):
    return (d << 1) if d >= 0 else ((-d) << 1) - 1


def zigzag_unmap(u):
    return -((u + 1) >> 1) if (u & 1) else (u >> 1)


def zz_transform(values):
    """values -> zigzag(successive differences), first entry vs 0."""
    if len(values) and int(values.max()) >= (1 << 62):
        bad = int(np.argmax(values >= np.uint64(1 << 62)))
        raise ValueError(
            f"value at index {bad} too large for differential coding (needs < 2**62)")
    s = values.astype(np.int64)
    d = np.empty(len(values), np.int64)
    if len(values):
        d[0] = s[0]
        np.subtract(s[1:], s[:-1], out=d[1:])
    return ((d << 1) ^ (d >> 63)).view(np.uint64)


def zz_untransform(diffs):
    """Inverse of zz_transform (prefix sums of unmapped differences)."""
    u = np.asarray(diffs, np.uint64)
    d = np.where(u & np.uint64(1),
                 -(((u + np.uint64(1)) >> np.uint64(1)).astype(np.int64)),
                 (u >> np.uint64(1)).astype(np.int64))
    return np.cumsum(d).astype(np.uint64)


def plain_width(max_value):
    for w in (8, 16, 32):
        if max_value < (1 << w):
            return w
    return 64


@dataclass(frozen=True)
class SizeReport:
    """Bit-exact storage accounting.

    payload_bits: the codewords themselves.
    sample_bits: positioned-access samples (offsets, absolute values).
    aux_bits: everything else addressed at query time (continuation
        bitmaps, rank directories, per-entry offset tables, run markers).
    """
    codec: str
    n: int
    payload_bits: int
    sample_bits: int
    aux_bits: int
    plain_bits: int

    @property
    def total_bits(self):
        return self.payload_bits + self.sample_bits + self.aux_bits

    @property
    def total_bytes(self):
        return (self.total_bits + 7) // 8

    @property
    def percent_of_plain(self):
        if self.plain_bits == 0:
            return 0.0
        return 100.0 * self.total_bits / self.plain_bits


@dataclass(frozen=True)
class CodecParams:
    sampling: int | None = None
    dac_widths: tuple | None = None
    pfd_block: int = 128
    pfd_exc_frac: float = 0.10

    def sampling_or(self, default):
        if self.sampling is None:
            return default
        if self.sampling < 1:
            raise ValueError("sampling must be >= 1")
        return self.sampling


class Cursor:
    """Forward iterator positioned just past the entry access() returned."""

    __slots__ = ("_vec", "_index")

    def __init__(self, vec, index):
        self._vec = vec
        self._index = index

    @property
    def index(self):
        """Index of the entry the next call will yield."""
        return self._index

    def __iter__(self):
        return self

    def __next__(self):
        if self._index >= self._vec.n:
            raise StopIteration
        v = self._step()
        self._index += 1
        return v

    def next(self):
        return self.__next__()

    def _step(self):
        raise NotImplementedError


class EncodedVector:
    base_id = None  # codec family name, set by subclasses
    zz_capable = True

    def __init__(self, n, zigzag, params):
        self.n = n
        self.zigzag = zigzag
        self.params = params

    @property
    def codec_id(self):
        return self.base_id + ("_zz" if self.zigzag else "")

    def __len__(self):
        return self.n

    def access(self, i):
        """Return (value at i, cursor yielding i+1, i+2, ...)."""
        if not 0 <= i < self.n:
            raise IndexError(f"index {i} out of range for length {self.n}")
        return self._access(i)

    def _access(self, i):
        raise NotImplementedError

    def decode_all(self):
        raise NotImplementedError

    def size_report(self):
        raise NotImplementedError

    # container hooks; params_bytes/components mirror parse_params/from_parts
    def params_bytes(self):
        return b""

    def components(self):
        raise NotImplementedError


def make_report(codec, n, payload, samples, aux, max_value):
    return SizeReport(codec=codec, n=n, payload_bits=int(payload),
                      sample_bits=int(samples), aux_bits=int(aux),
                      plain_bits=n * plain_width(max_value))


def sample_values(values, h):
    """Absolute originals kept alongside differential streams."""
    return values[::h].copy() if len(values) else values[:0].copy()
