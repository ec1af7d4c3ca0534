"""Minimal-binary payload with an offset directory.

Entry x is stored as y = x + 1 using exactly bit_length(y) bits, with no
delimiters in the payload. Addressing comes from the directory: an
absolute offset every h entries plus, for every entry, its offset
relative to the enclosing sample block. The relative width covers the
worst case (h-1) * max_code_length, so the directory dominates the cost
for small values; that is the price of O(1) positioned access.
"""

import struct

import numpy as np

from .. import kernels as K
from ..bitio import words_for
from .base import (Cursor, EncodedVector, MASK64, DEFAULT_SAMPLING,
                   bit_lengths, as_u64, make_report, sample_values,
                   zz_transform, zz_untransform)


class _FvCursor(Cursor):
    __slots__ = ("_running", "_scratch")

    def __init__(self, vec, index, running):
        super().__init__(vec, index)
        self._running = running
        self._scratch = np.empty(1, np.uint64)

    def _step(self):
        vec = self._vec
        vec._run(self._index, 1, self._scratch)
        u = int(self._scratch[0]) - 1
        if vec.zigzag:
            d = -((u + 1) >> 1) if (u & 1) else (u >> 1)
            self._running = (self._running + d) & MASK64
            return self._running
        return u


class FvVector(EncodedVector):
    base_id = "fv"

    def __init__(self, n, zigzag, params, payload, payload_bits, abs_words,
                 abs_width, rel_words, rel_width, svals, max_value):
        super().__init__(n, zigzag, params)
        self.payload = payload
        self.payload_bits = payload_bits
        self.abs_words = abs_words
        self.abs_width = abs_width
        self.rel_words = rel_words
        self.rel_width = rel_width
        self.svals = svals
        self.max_value = max_value
        self.h = params.sampling_or(DEFAULT_SAMPLING)

    @classmethod
    def build(cls, values, params, zigzag=False):
        v = as_u64(values)
        h = params.sampling_or(DEFAULT_SAMPLING)
        mx = int(v.max()) if len(v) else 0
        if zigzag:
            enc = zz_transform(v)
        else:
            if mx >= MASK64:
                bad = int(np.argmax(v == np.uint64(MASK64)))
                raise ValueError(
                    f"value at index {bad} too large for this codec (max 2**64-2)")
            enc = v
        y = enc + np.uint64(1)
        lens = bit_lengths(y)
        pre = np.zeros(len(v) + 1, np.uint64)
        np.cumsum(lens, out=pre[1:])
        total = int(pre[-1])
        payload = np.zeros(words_for(total), np.uint64)
        K.pack_var_into(y, lens, payload, 0)

        maxlen = int(lens.max()) if len(v) else 1
        aw = max(1, total.bit_length())
        rw = max(1, ((h - 1) * maxlen).bit_length())
        offs = np.ascontiguousarray(pre[:len(v):h])
        abs_words = np.zeros(words_for(len(offs) * aw), np.uint64)
        K.pack_fixed_into(offs, aw, abs_words, 0)
        blk = (np.arange(len(v), dtype=np.int64) // h) * h
        rel = pre[:len(v)] - pre[blk]
        rel_words = np.zeros(words_for(len(v) * rw), np.uint64)
        K.pack_fixed_into(rel, rw, rel_words, 0)
        svals = sample_values(v, h) if zigzag else None
        return cls(len(v), zigzag, params, payload, total, abs_words, aw,
                   rel_words, rw, svals, mx)

    def _run(self, start, count, out):
        K.fv_decode_run(self.payload, self.abs_words, self.abs_width,
                        self.rel_words, self.rel_width, self.h,
                        self.payload_bits, self.n, start, count, out)

    def _access(self, i):
        if self.zigzag:
            s = i // self.h
            cnt = i - s * self.h
            val = int(self.svals[s])
            if cnt:
                scratch = np.empty(cnt, np.uint64)
                self._run(s * self.h + 1, cnt, scratch)
                scratch -= np.uint64(1)
                val = K.zz_reduce(scratch, cnt, val)
        else:
            scratch = np.empty(1, np.uint64)
            self._run(i, 1, scratch)
            val = int(scratch[0]) - 1
        return val, _FvCursor(self, i + 1, val)

    def decode_all(self):
        out = np.empty(self.n, np.uint64)
        if self.n:
            self._run(0, self.n, out)
            out -= np.uint64(1)
        return zz_untransform(out) if self.zigzag else out

    def size_report(self):
        ns = (self.n + self.h - 1) // self.h
        sb = ns * self.abs_width + (ns * 64 if self.zigzag else 0)
        return make_report(self.codec_id, self.n, self.payload_bits, sb,
                           self.n * self.rel_width, self.max_value)

    def params_bytes(self):
        return struct.pack("<IBQ", self.h, self.rel_width, self.max_value)

    def components(self):
        ns = (self.n + self.h - 1) // self.h
        comps = [(self.payload_bits, self.payload),
                 (ns * self.abs_width, self.abs_words),
                 (self.n * self.rel_width, self.rel_words)]
        if self.zigzag:
            comps.append((ns * 64, self.svals))
        return comps

    @classmethod
    def from_parts(cls, n, zigzag, raw_params, comps, params):
        h, rw, mx = struct.unpack("<IBQ", raw_params)
        params = type(params)(sampling=h, dac_widths=params.dac_widths,
                              pfd_block=params.pfd_block,
                              pfd_exc_frac=params.pfd_exc_frac)
        payload_bits, payload = comps[0]
        _, abs_words = comps[1]
        _, rel_words = comps[2]
        aw = max(1, payload_bits.bit_length())
        svals = comps[3][1][: (n + h - 1) // h].copy() if zigzag else None
        return cls(n, zigzag, params, payload, payload_bits, abs_words, aw,
                   rel_words, rw, svals, mx)
