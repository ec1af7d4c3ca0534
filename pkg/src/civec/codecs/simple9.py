"""Simple9: 32-bit words holding equal-width lanes, selector in low 4 bits.

Nine layouts (count x width): 28x1, 14x2, 9x3, 7x4, 5x5, 4x7, 3x9, 2x14,
1x28. The packer is greedy densest-first; a final group shorter than 28
uses the layout with the fewest lanes that still cover the remainder when
that keeps it in one word (any single-word choice costs the same 32 bits).
Values must fit 28 bits. Samples store (word_index << 5) | lane_index for
every h-th entry.
"""

import struct

import numpy as np

from .. import kernels as K
from ..bitio import words_for
from .base import (Cursor, EncodedVector, MASK64, DEFAULT_SAMPLING,
                   as_u64, make_report, sample_values, zz_transform,
                   zz_untransform)

S9_COUNTS = K.S9_COUNTS
S9_WIDTHS = K.S9_WIDTHS

_COUNT_LUT = np.array(S9_COUNTS + (0,) * 7, np.uint32)  # selector -> count


def measure_words(values):
    """Number of 32-bit words the greedy packer needs."""
    return K.s9_measure(np.asarray(values, np.uint64))


class _S9Cursor(Cursor):
    __slots__ = ("_word", "_elem", "_running", "_scratch")

    def __init__(self, vec, index, word, elem, running):
        super().__init__(vec, index)
        self._word = word
        self._elem = elem
        self._running = running
        self._scratch = np.empty(1, np.uint64)

    def _step(self):
        vec = self._vec
        self._word, self._elem = K.s9_decode_run(
            vec.words, self._word, self._elem, 1, self._scratch)
        u = int(self._scratch[0])
        if vec.zigzag:
            d = -((u + 1) >> 1) if (u & 1) else (u >> 1)
            self._running = (self._running + d) & MASK64
            return self._running
        return u


class Simple9Vector(EncodedVector):
    base_id = "s9"

    def __init__(self, n, zigzag, params, words, samples, sample_width,
                 svals, max_value):
        super().__init__(n, zigzag, params)
        self.words = words
        self.samples = samples
        self.sample_width = sample_width
        self.svals = svals
        self.max_value = max_value
        self.h = params.sampling_or(DEFAULT_SAMPLING)

    @classmethod
    def build(cls, values, params, zigzag=False):
        v = as_u64(values)
        h = params.sampling_or(DEFAULT_SAMPLING)
        mx = int(v.max()) if len(v) else 0
        enc = zz_transform(v) if zigzag else v
        if len(enc) and int(enc.max()) >= (1 << 28):
            bad = int(np.argmax(enc >= np.uint64(1 << 28)))
            raise ValueError(
                f"value at index {bad} does not fit 28 bits"
                + (" after difference mapping" if zigzag else ""))
        nwords = K.s9_measure(enc)
        words = np.zeros(max(1, nwords), np.uint32)
        if len(enc):
            K.s9_encode_into(enc, words)
        # entry counts per word drive the sample (word, lane) addresses
        counts = _COUNT_LUT[(words[:nwords] & 15).astype(np.int64)]
        cum = np.cumsum(counts, dtype=np.int64)
        sw = cls._sample_width(nwords)
        starts = np.arange(0, len(v), h, dtype=np.int64)
        widx = np.searchsorted(cum, starts, side="right")
        prev = np.where(widx > 0, cum[widx - 1], 0)
        combined = ((widx.astype(np.uint64) << np.uint64(5))
                    | (starts - prev).astype(np.uint64))
        samples = np.zeros(words_for(len(starts) * sw), np.uint64)
        K.pack_fixed_into(combined, sw, samples, 0)
        svals = sample_values(v, h) if zigzag else None
        return cls(len(v), zigzag, params, words, samples, sw, svals, mx)

    @staticmethod
    def _sample_width(nwords):
        if nwords <= 0:
            return 1
        return (((nwords - 1) << 5) | 31).bit_length()

    def _sample_at(self, s):
        c = K.read_bits(self.samples, s * self.sample_width, self.sample_width)
        return c >> 5, c & 31

    def _access(self, i):
        h = self.h
        s = i // h
        w, e = self._sample_at(s)
        if self.zigzag:
            cnt = i - s * h
            scratch = np.empty(cnt + 1, np.uint64)
            w, e = K.s9_decode_run(self.words, w, e, cnt + 1, scratch)
            val = K.zz_reduce(scratch[1:], cnt, int(self.svals[s]))
        else:
            cnt = i - s * h + 1
            scratch = np.empty(cnt, np.uint64)
            w, e = K.s9_decode_run(self.words, w, e, cnt, scratch)
            val = int(scratch[cnt - 1])
        return val, _S9Cursor(self, i + 1, w, e, val)

    def decode_all(self):
        out = np.empty(self.n, np.uint64)
        if self.n:
            K.s9_decode_run(self.words, 0, 0, self.n, out)
        return zz_untransform(out) if self.zigzag else out

    def size_report(self):
        ns = (self.n + self.h - 1) // self.h
        sb = ns * self.sample_width + (ns * 64 if self.zigzag else 0)
        return make_report(self.codec_id, self.n, len(self.words) * 32, sb, 0,
                           self.max_value)

    def params_bytes(self):
        return struct.pack("<IQ", self.h, self.max_value)

    def components(self):
        ns = (self.n + self.h - 1) // self.h
        raw = self.words.tobytes()
        pad = (-len(raw)) % 8
        w64 = np.frombuffer(raw + b"\0" * pad, np.uint64)
        comps = [(len(self.words) * 32, w64),
                 (ns * self.sample_width, self.samples)]
        if self.zigzag:
            comps.append((ns * 64, self.svals))
        return comps

    @classmethod
    def from_parts(cls, n, zigzag, raw_params, comps, params):
        h, mx = struct.unpack("<IQ", raw_params)
        params = type(params)(sampling=h, dac_widths=params.dac_widths,
                              pfd_block=params.pfd_block,
                              pfd_exc_frac=params.pfd_exc_frac)
        nbits, w64 = comps[0]
        nwords = nbits // 32
        words = np.frombuffer(w64.tobytes(), np.uint32)[:nwords].copy()
        if not len(words):
            words = np.zeros(1, np.uint32)
        _, samples = comps[1]
        sw = cls._sample_width(nwords)
        svals = comps[2][1][: (n + h - 1) // h].copy() if zigzag else None
        return cls(n, zigzag, params, words, samples, sw, svals, mx)
