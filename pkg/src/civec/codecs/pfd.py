"""Patched frame-of-reference coding in blocks of 128 entries.

Each block picks the smallest lane width b whose exception count (values
needing more than b bits) stays within a tenth of the block, then stores:
a header (b:7, exception count:4, exception width:7), the lanes with
exception slots zeroed, the 7-bit in-block exception positions, and the
exception values at the per-block maximal bit length. Samples every h
entries record block start offsets; h must be a multiple of the block.
"""

import struct

import numpy as np

from .. import kernels as K
from ..bitio import words_for
from .base import (Cursor, EncodedVector, MASK64, PFD_DEFAULT_SAMPLING,
                   bit_lengths, as_u64, make_report, sample_values,
                   zz_transform, zz_untransform)

HEADER_BITS = 18
POS_BITS = 7
MAX_EXC = 15  # the header has a 4-bit exception count


def choose_width(values, exc_frac):
    """Smallest b with at most exc_frac * len(values) exceptions.

    Returns (b, exception_index_array).
    """
    bl = np.sort(bit_lengths(values))
    c = len(values)
    need = c - exc_frac * c
    k = int(np.ceil(need - 1e-9))
    k = min(max(k, 0), c)
    b = int(bl[k - 1]) if k else 0
    exc = np.flatnonzero(bit_lengths(values) > b)
    return b, exc


class _PfdCursor(Cursor):
    __slots__ = ("_buf", "_base", "_off", "_running")

    def __init__(self, vec, index, buf, base, off, running):
        super().__init__(vec, index)
        self._buf = buf          # decoded current block
        self._base = base        # index of buf[0]
        self._off = off          # bit offset of the next block
        self._running = running

    def _step(self):
        vec = self._vec
        i = self._index
        if i >= self._base + len(self._buf):
            c = min(vec.block, vec.n - i)
            self._buf = np.empty(c, np.uint64)
            self._off = K.pfd_decode_block(vec.payload, self._off, c, self._buf)
            self._base = i
        u = int(self._buf[i - self._base])
        if vec.zigzag:
            d = -((u + 1) >> 1) if (u & 1) else (u >> 1)
            self._running = (self._running + d) & MASK64
            return self._running
        return u


class PfdVector(EncodedVector):
    base_id = "pfd"

    def __init__(self, n, zigzag, params, payload, payload_bits, samples,
                 off_width, svals, max_value, block, exc_frac, h):
        super().__init__(n, zigzag, params)
        self.payload = payload
        self.payload_bits = payload_bits
        self.samples = samples
        self.off_width = off_width
        self.svals = svals
        self.max_value = max_value
        self.block = block
        self.exc_frac = exc_frac
        self.h = h

    @classmethod
    def build(cls, values, params, zigzag=False):
        v = as_u64(values)
        h = params.sampling_or(PFD_DEFAULT_SAMPLING)
        block = params.pfd_block
        frac = params.pfd_exc_frac
        if block < 1 or block > 128:
            raise ValueError("block size must be in 1..128 (7-bit positions)")
        if h % block:
            raise ValueError("sampling step must be a multiple of the block size")
        mx = int(v.max()) if len(v) else 0
        enc = zz_transform(v) if zigzag else v

        plans = []
        block_offs = []
        total = 0
        for base in range(0, len(enc), block):
            chunk = enc[base:base + block]
            block_offs.append(total)
            plan = cls._plan_block(chunk, frac)
            plans.append(plan)
            total += HEADER_BITS + len(chunk) * plan[0] + len(plan[1]) * (POS_BITS + plan[2])
        payload = np.zeros(words_for(total), np.uint64)
        for bi, base in enumerate(range(0, len(enc), block)):
            cls._emit_block(payload, block_offs[bi], enc[base:base + block],
                            plans[bi])

        step = h // block
        offs = np.asarray(block_offs[::step] if block_offs else [], np.uint64)
        off_width = max(1, total.bit_length())
        samples = np.zeros(words_for(len(offs) * off_width), np.uint64)
        K.pack_fixed_into(offs, off_width, samples, 0)
        svals = sample_values(v, h) if zigzag else None
        return cls(len(v), zigzag, params, payload, total, samples,
                   off_width, svals, mx, block, frac, h)

    @staticmethod
    def _plan_block(chunk, frac):
        b, exc = choose_width(chunk, frac)
        if len(exc) > MAX_EXC:
            raise ValueError(
                f"{len(exc)} exceptions in one block exceed the 4-bit header "
                "field; lower pfd_exc_frac")
        we = int(bit_lengths(chunk[exc]).max()) if len(exc) else 0
        return b, exc, we

    @staticmethod
    def _emit_block(payload, off, chunk, plan):
        b, exc, we = plan
        K.write_bits(payload, off, b, 7)
        K.write_bits(payload, off + 7, len(exc), 4)
        K.write_bits(payload, off + 11, we, 7)
        off += HEADER_BITS
        lanes = chunk.copy()
        lanes[exc] = 0
        off = K.pack_fixed_into(lanes, b, payload, off)
        off = K.pack_fixed_into(exc.astype(np.uint64), POS_BITS, payload, off)
        K.pack_fixed_into(chunk[exc], we, payload, off)

    def _sample_off(self, s):
        return K.read_bits(self.samples, s * self.off_width, self.off_width)

    def _access(self, i):
        h, block = self.h, self.block
        s = i // h
        off = self._sample_off(s)
        bi = (s * h) // block
        target = i // block
        if self.zigzag:
            running = int(self.svals[s])
            pos = s * h  # absolute index of the next undecoded entry
            while True:
                c = min(block, self.n - bi * block)
                buf = np.empty(c, np.uint64)
                off = K.pfd_decode_block(self.payload, off, c, buf)
                lo = 1 if pos == s * h else 0  # skip the sampled entry itself
                take = min(i - pos + 1, c) - lo if bi == target else c - lo
                if take > 0:
                    running = K.zz_reduce(buf[lo:], take, running)
                if bi == target:
                    used = i - bi * block + 1
                    return running, _PfdCursor(self, i + 1, buf[:0] if used >= c
                                               else buf, bi * block, off,
                                               running)
                pos = (bi + 1) * block
                bi += 1
        while bi < target:
            c = min(block, self.n - bi * block)
            off += K.pfd_block_bits(self.payload, off, c)
            bi += 1
        c = min(block, self.n - bi * block)
        buf = np.empty(c, np.uint64)
        end = K.pfd_decode_block(self.payload, off, c, buf)
        val = int(buf[i - bi * block])
        return val, _PfdCursor(self, i + 1, buf, bi * block, end, val)

    def decode_all(self):
        out = np.empty(self.n, np.uint64)
        off = 0
        for base in range(0, self.n, self.block):
            c = min(self.block, self.n - base)
            off = K.pfd_decode_block(self.payload, off, c, out[base:base + c])
        return zz_untransform(out) if self.zigzag else out

    def size_report(self):
        ns = (self.n + self.h - 1) // self.h
        sb = ns * self.off_width + (ns * 64 if self.zigzag else 0)
        return make_report(self.codec_id, self.n, self.payload_bits, sb, 0,
                           self.max_value)

    def params_bytes(self):
        return struct.pack("<IIIQ", self.h, self.block,
                           round(self.exc_frac * 1000), self.max_value)

    def components(self):
        ns = (self.n + self.h - 1) // self.h
        comps = [(self.payload_bits, self.payload),
                 (ns * self.off_width, self.samples)]
        if self.zigzag:
            comps.append((ns * 64, self.svals))
        return comps

    @classmethod
    def from_parts(cls, n, zigzag, raw_params, comps, params):
        h, block, milli, mx = struct.unpack("<IIIQ", raw_params)
        frac = milli / 1000.0
        params = type(params)(sampling=h, dac_widths=params.dac_widths,
                              pfd_block=block, pfd_exc_frac=frac)
        payload_bits, payload = comps[0]
        _, samples = comps[1]
        off_width = max(1, payload_bits.bit_length())
        svals = comps[2][1][: (n + h - 1) // h].copy() if zigzag else None
        return cls(n, zigzag, params, payload, payload_bits, samples,
                   off_width, svals, mx, block, frac, h)
