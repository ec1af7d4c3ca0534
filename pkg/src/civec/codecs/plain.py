"""Uncompressed baseline: values at the narrowest of 8/16/32/64 bits."""

import numpy as np

from .base import Cursor, EncodedVector, as_u64, make_report, plain_width

_DTYPES = {8: np.uint8, 16: np.uint16, 32: np.uint32, 64: np.uint64}


class PlainCursor(Cursor):
    __slots__ = ()

    def _step(self):
        return int(self._vec._arr[self._index])


class PlainVector(EncodedVector):
    base_id = "plain"
    zz_capable = False

    def __init__(self, arr, width, params):
        super().__init__(len(arr), False, params)
        self._arr = arr
        self.width = width

    @classmethod
    def build(cls, values, params, zigzag=False):
        if zigzag:
            raise ValueError("plain has no differential variant")
        v = as_u64(values)
        w = plain_width(int(v.max()) if len(v) else 0)
        return cls(v.astype(_DTYPES[w]), w, params)

    def _access(self, i):
        return int(self._arr[i]), PlainCursor(self, i + 1)

    def decode_all(self):
        return self._arr.astype(np.uint64)

    def size_report(self):
        mx = int(self._arr.max()) if self.n else 0
        return make_report(self.codec_id, self.n, self.n * self.width, 0, 0, mx)

    def params_bytes(self):
        return bytes([self.width])

    def components(self):
        raw = self._arr.tobytes()
        pad = (-len(raw)) % 8
        words = np.frombuffer(raw + b"\0" * pad, dtype=np.uint64)
        return [(self.n * self.width, words)]

    @classmethod
    def from_parts(cls, n, zigzag, raw_params, comps, params):
        w = raw_params[0]
        nbits, words = comps[0]
        arr = np.frombuffer(words.tobytes(), dtype=_DTYPES[w])[:n].copy()
        return cls(arr, w, params)
