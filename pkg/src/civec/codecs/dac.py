"""Directly addressable codes: byte-code generalized to planned chunk widths.

Values are split into per-level chunks; a continuation bit per chunk (in a
separate bitmap per level, absent on the last level) says whether the
value extends further. Level l+1 keeps entries in the order induced by
rank1 over level l's bitmap, so positioned access is a chain of ranks.
Rank directories store a 64-bit cumulative count every 512 bitmap bits.

plan_level_widths picks widths minimizing total bits (chunks + bitmaps +
rank directories) by dynamic programming over consumed bit counts; the
cost model matches the built structure bit for bit.
"""

import numpy as np

from .. import kernels as K
from ..bitio import words_for
from .base import (Cursor, EncodedVector, MASK64, DEFAULT_SAMPLING,
                   bit_lengths, as_u64, make_report, sample_values,
                   zz_transform, zz_untransform)

_DUMMY = np.zeros(1, np.uint64)
_DUMMY_I = np.zeros(1, np.int64)


def _bitmap_cost(m):
    return 64 * ((m + 63) // 64) + 64 * ((m >> 9) + 1)


def plan_level_widths(values):
    """Width per level minimizing the exact stored size."""
    v = as_u64(values)
    if not len(v):
        return (1,)
    lens = np.maximum(bit_lengths(v), 1)
    j = int(lens.max())
    counts = np.bincount(lens, minlength=j + 1)
    below = np.cumsum(counts)
    alive = [len(v) - int(below[t]) if t <= j else 0 for t in range(j + 1)]
    alive[0] = len(v)

    best = [0] * (j + 1)
    pick = [0] * (j + 1)
    for t in range(j - 1, -1, -1):
        m = alive[t]
        best_cost = None
        for b in range(1, j - t + 1):
            cost = m * b + best[t + b]
            if t + b < j:
                cost += _bitmap_cost(m)
            if best_cost is None or cost < best_cost:
                best_cost = cost
                pick[t] = b
        best[t] = best_cost
    widths = []
    t = 0
    while t < j:
        widths.append(pick[t])
        t += pick[t]
    return tuple(widths)


class _DacCursor(Cursor):
    __slots__ = ("_kpos", "_running", "_scratch")

    def __init__(self, vec, index, kpos, running):
        super().__init__(vec, index)
        self._kpos = kpos
        self._running = running
        self._scratch = np.empty(1, np.uint64)

    def _step(self):
        vec = self._vec
        if self._kpos is None:
            self._kpos = np.zeros(vec.nlevels, np.int64)
            vec._init_kpos(self._index, self._kpos)
        vec._run(self._kpos, 1, self._scratch)
        u = int(self._scratch[0])
        if vec.zigzag:
            d = -((u + 1) >> 1) if (u & 1) else (u >> 1)
            self._running = (self._running + d) & MASK64
            return self._running
        return u


class DacVector(EncodedVector):
    base_id = "dac"

    def __init__(self, n, zigzag, params, widths, counts, chunks, cbase,
                 bitmaps, bword, rankdir, rbase, svals, max_value):
        super().__init__(n, zigzag, params)
        self.widths = tuple(int(w) for w in widths)
        self.nlevels = len(self.widths)
        self.counts = counts
        self.chunks = chunks
        self.cbase = cbase
        self.bitmaps = bitmaps
        self.bword = bword
        self.rankdir = rankdir
        self.rbase = rbase
        self.svals = svals
        self.max_value = max_value
        self.h = params.sampling_or(DEFAULT_SAMPLING)
        self._warr = np.asarray(self.widths, np.uint8)

    @classmethod
    def build(cls, values, params, zigzag=False):
        v = as_u64(values)
        mx = int(v.max()) if len(v) else 0
        enc = zz_transform(v) if zigzag else v
        widths = params.dac_widths or plan_level_widths(enc)
        widths = tuple(int(w) for w in widths)
        if not widths or any(not 1 <= w <= 64 for w in widths):
            raise ValueError("level widths must be in 1..64")
        lens = np.maximum(bit_lengths(enc), 1) if len(enc) else np.zeros(0, np.uint8)
        if len(enc) and sum(widths) < int(lens.max()):
            raise ValueError("level widths too narrow for the largest value")

        nlev = len(widths)
        tpre = np.cumsum([0] + list(widths))
        counts = []
        chunk_vals = []
        cont_flags = []
        cur = enc
        cur_lens = lens
        for l in range(nlev):
            counts.append(len(cur))
            chunk_vals.append((cur >> np.uint64(tpre[l]))
                              & np.uint64(((1 << widths[l]) - 1)))
            if l < nlev - 1:
                cont = cur_lens > tpre[l + 1]
                cont_flags.append(cont)
                cur = cur[cont]
                cur_lens = cur_lens[cont]

        cbase = np.zeros(nlev + 1, np.int64)
        for l in range(nlev):
            cbase[l + 1] = int(cbase[l]) + counts[l] * widths[l]
        chunks = np.zeros(words_for(int(cbase[-1])), np.uint64)
        for l in range(nlev):
            K.pack_fixed_into(chunk_vals[l], widths[l], chunks, int(cbase[l]))

        if nlev > 1:
            bword = np.zeros(nlev - 1, np.int64)
            rbase = np.zeros(nlev - 1, np.int64)
            wtot = rtot = 0
            for l in range(nlev - 1):
                bword[l] = wtot
                rbase[l] = rtot
                wtot += (counts[l] + 63) // 64
                rtot += (counts[l] >> 9) + 1
            bitmaps = np.zeros(max(1, wtot), np.uint64)
            rankdir = np.zeros(max(1, rtot), np.uint64)
            for l in range(nlev - 1):
                pos = np.flatnonzero(cont_flags[l]).astype(np.uint64)
                base = int(bword[l])
                np.bitwise_or.at(bitmaps, base + (pos >> np.uint64(6)),
                                 np.uint64(1) << (pos & np.uint64(63)))
                cls._fill_rankdir(bitmaps, base, counts[l], rankdir,
                                  int(rbase[l]))
        else:
            bitmaps = _DUMMY
            bword = _DUMMY_I
            rankdir = _DUMMY
            rbase = _DUMMY_I

        svals = sample_values(v, params.sampling_or(DEFAULT_SAMPLING)) \
            if zigzag else None
        return cls(len(v), zigzag, params, widths, counts, chunks, cbase,
                   bitmaps, bword, rankdir, rbase, svals, mx)

    @staticmethod
    def _fill_rankdir(bitmaps, word_base, nbits, rankdir, dir_base):
        nd = (nbits >> 9) + 1
        nw = (nbits + 63) // 64
        pc = np.bitwise_count(bitmaps[word_base:word_base + nw]).astype(np.uint64)
        pad = (-len(pc)) % 8
        if pad:
            pc = np.concatenate([pc, np.zeros(pad, np.uint64)])
        per512 = pc.reshape(-1, 8).sum(axis=1, dtype=np.uint64)
        cum = np.zeros(len(per512) + 1, np.uint64)
        np.cumsum(per512, out=cum[1:])
        rankdir[dir_base:dir_base + nd] = cum[:nd]

    def _init_kpos(self, i, kpos):
        K.dac_init_cursor(self.bitmaps, self.bword, self.rankdir, self.rbase,
                          self.nlevels, i, kpos)

    def _run(self, kpos, count, out):
        K.dac_decode_run(self.chunks, self.cbase, self._warr, self.bitmaps,
                         self.bword, self.rankdir, self.rbase, self.nlevels,
                         kpos, count, out)

    def _access(self, i):
        if self.zigzag:
            s = i // self.h
            cnt = i - s * self.h
            kpos = np.zeros(self.nlevels, np.int64)
            self._init_kpos(s * self.h, kpos)
            scratch = np.empty(cnt + 1, np.uint64)
            self._run(kpos, cnt + 1, scratch)
            val = K.zz_reduce(scratch[1:], cnt, int(self.svals[s]))
            return val, _DacCursor(self, i + 1, kpos, val)
        val = K.dac_access(self.chunks, self.cbase, self._warr, self.bitmaps,
                           self.bword, self.rankdir, self.rbase, self.nlevels,
                           i)
        return val, _DacCursor(self, i + 1, None, val)

    def decode_all(self):
        out = np.empty(self.n, np.uint64)
        if self.n:
            kpos = np.zeros(self.nlevels, np.int64)
            self._run(kpos, self.n, out)
        return zz_untransform(out) if self.zigzag else out

    def size_report(self):
        payload = sum(self.counts[l] * self.widths[l]
                      for l in range(self.nlevels))
        aux = sum(_bitmap_cost(self.counts[l])
                  for l in range(self.nlevels - 1))
        ns = (self.n + self.h - 1) // self.h if self.n else 0
        sb = ns * 64 if self.zigzag else 0
        return make_report(self.codec_id, self.n, payload, sb, aux,
                           self.max_value)

    def params_bytes(self):
        import struct
        head = struct.pack("<IQB", self.h, self.max_value, self.nlevels)
        return head + bytes(self.widths)

    def components(self):
        bits_chunks = int(self.cbase[-1])
        nbw = sum((self.counts[l] + 63) // 64 for l in range(self.nlevels - 1))
        comps = [(bits_chunks, self.chunks), (nbw * 64, self.bitmaps)]
        if self.zigzag:
            ns = (self.n + self.h - 1) // self.h if self.n else 0
            comps.append((ns * 64, self.svals))
        return comps

    @classmethod
    def from_parts(cls, n, zigzag, raw_params, comps, params):
        import struct
        h, mx, nlev = struct.unpack("<IQB", raw_params[:13])
        widths = tuple(raw_params[13:13 + nlev])
        params = type(params)(sampling=h, dac_widths=widths,
                              pfd_block=params.pfd_block,
                              pfd_exc_frac=params.pfd_exc_frac)
        _, chunks = comps[0]
        _, bitmaps = comps[1]
        if not len(bitmaps):
            bitmaps = _DUMMY
        counts = [n]
        cbase = np.zeros(nlev + 1, np.int64)
        if nlev > 1:
            bword = np.zeros(nlev - 1, np.int64)
            rbase = np.zeros(nlev - 1, np.int64)
            rtot = wtot = 0
            for l in range(nlev - 1):
                bword[l] = wtot
                rbase[l] = rtot
                nw = (counts[l] + 63) // 64
                seg = bitmaps[wtot:wtot + nw]
                counts.append(int(np.bitwise_count(seg).sum()))
                wtot += nw
                rtot += (counts[l] >> 9) + 1
            rankdir = np.zeros(max(1, rtot), np.uint64)
            for l in range(nlev - 1):
                cls._fill_rankdir(bitmaps, int(bword[l]), counts[l], rankdir,
                                  int(rbase[l]))
        else:
            bword = _DUMMY_I
            rankdir = _DUMMY
            rbase = _DUMMY_I
        for l in range(nlev):
            cbase[l + 1] = int(cbase[l]) + counts[l] * widths[l]
        svals = comps[2][1][: (n + h - 1) // h].copy() if zigzag else None
        vec = cls(n, zigzag, params, widths, counts, chunks, cbase, bitmaps,
                  bword, rankdir, rbase, svals, mx)
        return vec
