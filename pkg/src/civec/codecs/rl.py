"""Run-length coding: one head value per maximal run plus a sparse
bitvector marking run starts.

access(i) is rank1(i+1) - 1 into the head array; cursors cache the end of
the current run (found once per run via select1) so sequential scans over
long runs cost O(1) per step. Values repeat exactly; there is no
differential variant of this codec.
"""

import struct

import numpy as np

from .. import kernels as K
from ..bitio import words_for
from ..sdvector import SparseBitvector
from .base import Cursor, EncodedVector, as_u64, make_report


class _RlCursor(Cursor):
    __slots__ = ("_k", "_run_end")

    def __init__(self, vec, index, k, run_end):
        super().__init__(vec, index)
        self._k = k
        self._run_end = run_end

    def _step(self):
        vec = self._vec
        if self._index >= self._run_end:
            self._k += 1
            self._run_end = vec._run_end(self._k)
        return vec._head(self._k)


class RlVector(EncodedVector):
    base_id = "rl"
    zz_capable = False

    def __init__(self, n, params, heads, head_width, nruns, starts, max_value):
        super().__init__(n, False, params)
        self.heads = heads
        self.head_width = head_width
        self.nruns = nruns
        self.starts = starts
        self.max_value = max_value

    @classmethod
    def build(cls, values, params, zigzag=False):
        if zigzag:
            raise ValueError("run-length coding has no differential variant")
        v = as_u64(values)
        mx = int(v.max()) if len(v) else 0
        if len(v):
            flags = np.empty(len(v), bool)
            flags[0] = True
            np.not_equal(v[1:], v[:-1], out=flags[1:])
            starts_at = np.flatnonzero(flags).astype(np.uint64)
        else:
            starts_at = np.zeros(0, np.uint64)
        r = len(starts_at)
        hw = max(1, mx.bit_length())
        heads = np.zeros(words_for(r * hw), np.uint64)
        if r:
            K.pack_fixed_into(v[starts_at.astype(np.int64)], hw, heads, 0)
        starts = SparseBitvector(starts_at, len(v))
        return cls(len(v), params, heads, hw, r, starts, mx)

    def _head(self, k):
        return K.read_bits(self.heads, k * self.head_width, self.head_width)

    def _run_end(self, k):
        if k + 1 < self.nruns:
            return self.starts.select1(k + 1)
        return self.n

    def _access(self, i):
        k = self.starts.rank1(i + 1) - 1
        return self._head(k), _RlCursor(self, i + 1, k, self._run_end(k))

    def decode_all(self):
        if not self.n:
            return np.zeros(0, np.uint64)
        hv = np.empty(self.nruns, np.uint64)
        K.unpack_fixed_run(self.heads, 0, self.head_width, self.nruns, hv)
        pos = self.starts.positions().astype(np.int64)
        lengths = np.diff(np.concatenate([pos, [self.n]]))
        return np.repeat(hv, lengths)

    def size_report(self):
        low, high, samples = self.starts.size_bits()
        return make_report(self.codec_id, self.n,
                           self.nruns * self.head_width, 0,
                           low + high + samples, self.max_value)

    def params_bytes(self):
        return struct.pack("<BQQ", self.head_width, self.nruns,
                           self.max_value)

    def components(self):
        return ([(self.nruns * self.head_width, self.heads)]
                + self.starts.components())

    @classmethod
    def from_parts(cls, n, zigzag, raw_params, comps, params):
        hw, r, mx = struct.unpack("<BQQ", raw_params)
        _, heads = comps[0]
        if 0 < r < n:
            l = max(0, (n // r).bit_length() - 1)
            nb = ((n - 1) >> l) + 1
            sel1 = comps[3][1][:(r + 63) // 64].copy()
            sel0 = comps[4][1][:(nb + 63) // 64].copy()
        else:
            sel1 = sel0 = np.zeros(0, np.uint64)
        starts = SparseBitvector.from_components(
            n, r, comps[1][1], comps[2][1], sel1, sel0)
        return cls(n, params, heads, hw, r, starts, mx)
