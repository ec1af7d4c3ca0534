"""Elias gamma and delta streams with positional samples.

Stored values are shifted by one (x+1) so zero is representable; the
shift caps direct inputs at 2**64 - 2. Samples record the bit offset of
every h-th codeword; access decodes at most h codewords from the sample.
Differential variants additionally keep the original value at each sample
so reconstruction folds at most h-1 mapped differences.
"""

import numpy as np

from .. import kernels as K
from ..bitio import words_for
from .base import (Cursor, EncodedVector, MASK64, DEFAULT_SAMPLING,
                   bit_lengths, as_u64, make_report, sample_values,
                   zz_transform, zz_untransform)


def _gamma_lengths(y):
    bl = bit_lengths(y).astype(np.uint64)
    return 2 * bl - 1


def _delta_lengths(y):
    bl = bit_lengths(y).astype(np.uint64)
    bl2 = bit_lengths(bl).astype(np.uint64)
    return (bl - 1) + (2 * bl2 - 1)


class _EliasCursor(Cursor):
    __slots__ = ("_pos", "_running", "_scratch")

    def __init__(self, vec, index, pos, running):
        super().__init__(vec, index)
        self._pos = pos
        self._running = running
        self._scratch = np.empty(1, np.uint64)

    def _step(self):
        vec = self._vec
        self._pos = vec._decode_run(vec.payload, self._pos, 1, self._scratch)
        y = int(self._scratch[0]) - 1
        if vec.zigzag:
            d = -((y + 1) >> 1) if (y & 1) else (y >> 1)
            self._running = (self._running + d) & MASK64
            return self._running
        return y


class _EliasVector(EncodedVector):
    def __init__(self, n, zigzag, params, payload, payload_bits, samples,
                 off_width, svals, max_value):
        super().__init__(n, zigzag, params)
        self.payload = payload
        self.payload_bits = payload_bits
        self.samples = samples
        self.off_width = off_width
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
        lens = cls._lengths(y)
        pre = np.zeros(len(v) + 1, np.uint64)
        np.cumsum(lens, out=pre[1:])
        total = int(pre[-1])
        payload = np.zeros(words_for(total), np.uint64)
        end = cls._encode_into(y, payload, 0)
        assert end == total
        offs = np.ascontiguousarray(pre[:len(v):h])
        off_width = max(1, total.bit_length())
        samples = np.zeros(words_for(len(offs) * off_width), np.uint64)
        K.pack_fixed_into(offs, off_width, samples, 0)
        svals = sample_values(v, h) if zigzag else None
        return cls(len(v), zigzag, params, payload, total, samples,
                   off_width, svals, mx)

    def _sample_off(self, s):
        return K.read_bits(self.samples, s * self.off_width, self.off_width)

    def _access(self, i):
        h = self.h
        s = i // h
        pos = self._sample_off(s)
        if self.zigzag:
            cnt = i - s * h
            scratch = np.empty(cnt + 1, np.uint64)
            pos = self._decode_run(self.payload, pos, cnt + 1, scratch)
            scratch -= np.uint64(1)
            val = K.zz_reduce(scratch[1:], cnt, int(self.svals[s]))
        else:
            cnt = i - s * h + 1
            scratch = np.empty(cnt, np.uint64)
            pos = self._decode_run(self.payload, pos, cnt, scratch)
            val = int(scratch[cnt - 1]) - 1
        return val, _EliasCursor(self, i + 1, pos, val)

    def decode_all(self):
        out = np.empty(self.n, np.uint64)
        if self.n:
            self._decode_run(self.payload, 0, self.n, out)
            out -= np.uint64(1)
        if self.zigzag:
            return zz_untransform(out)
        return out

    def size_report(self):
        ns = (self.n + self.h - 1) // self.h
        sb = ns * self.off_width + (ns * 64 if self.zigzag else 0)
        return make_report(self.codec_id, self.n, self.payload_bits, sb, 0,
                           self.max_value)

    def params_bytes(self):
        import struct
        return struct.pack("<IQ", self.h, self.max_value)

    def components(self):
        ns = (self.n + self.h - 1) // self.h
        comps = [(self.payload_bits, self.payload),
                 (ns * self.off_width, self.samples)]
        if self.zigzag:
            comps.append((ns * 64, self.svals))
        return comps

    @classmethod
    def from_parts(cls, n, zigzag, raw_params, comps, params):
        import struct
        h, mx = struct.unpack("<IQ", raw_params)
        params = type(params)(sampling=h, dac_widths=params.dac_widths,
                              pfd_block=params.pfd_block,
                              pfd_exc_frac=params.pfd_exc_frac)
        payload_bits, payload = comps[0]
        _, samples = comps[1]
        off_width = max(1, payload_bits.bit_length())
        svals = comps[2][1][: (n + h - 1) // h].copy() if zigzag else None
        return cls(n, zigzag, params, payload, payload_bits, samples,
                   off_width, svals, mx)


class GammaVector(_EliasVector):
    base_id = "gamma"
    _lengths = staticmethod(_gamma_lengths)
    _encode_into = staticmethod(K.gamma_encode_into)
    _decode_run = staticmethod(K.gamma_decode_run)


class DeltaVector(_EliasVector):
    base_id = "delta"
    _lengths = staticmethod(_delta_lengths)
    _encode_into = staticmethod(K.delta_encode_into)
    _decode_run = staticmethod(K.delta_decode_run)
