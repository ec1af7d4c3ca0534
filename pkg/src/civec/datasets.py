"""Input corpora for the measurements: synthetic integer streams and the
integer sequences induced by a text (suffix array, BWT, LCP, psi).

Texts are remapped to codes 1..sigma by sorted byte order, with a unique
terminator 0 appended; the terminator sorts before everything, so the
suffix array of length n+1 starts with the full-text position n.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels as K
from .rng import splitmix_array

MASK64 = (1 << 64) - 1


class TextInput:
    """A byte string remapped for suffix processing.

    codes holds n+1 int32 entries: the remapped text then the 0
    terminator. n is the original text length.
    """

    __slots__ = ("codes", "n", "sigma", "_code_of", "_byte_of")

    def __init__(self, data):
        if isinstance(data, str):
            data = data.encode()
        raw = np.frombuffer(bytes(data), np.uint8)
        alphabet = np.unique(raw)
        self.sigma = len(alphabet)
        self.n = len(raw)
        lut = np.zeros(256, np.int32)
        lut[alphabet] = np.arange(1, self.sigma + 1, dtype=np.int32)
        self.codes = np.empty(self.n + 1, np.int32)
        self.codes[:self.n] = lut[raw]
        self.codes[self.n] = 0
        self._code_of = {int(b): i + 1 for i, b in enumerate(alphabet)}
        self._byte_of = {i + 1: int(b) for i, b in enumerate(alphabet)}

    def code_of(self, byte):
        return self._code_of[byte]

    def byte_of(self, code):
        return self._byte_of[code]


def _sa_small(codes):
    n = len(codes)
    flat = np.ascontiguousarray(codes[:-1], np.uint8)
    sa = np.empty(n, np.int32)
    scratch = np.empty(n, np.int32)
    K.suffix_profile_batch(flat, n - 1, 1, sa, scratch, scratch, scratch)
    return sa.astype(np.int64)


def _sa_doubling(codes):
    n = len(codes)
    rank = np.asarray(codes, np.int64)
    k = 1
    while True:
        key2 = np.full(n, -1, np.int64)
        key2[:n - k] = rank[k:]
        order = np.lexsort((key2, rank))
        r1 = rank[order]
        r2 = key2[order]
        newr = np.empty(n, np.int64)
        bumps = np.concatenate(
            [[0], ((r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1])).astype(np.int64)])
        newr[order] = np.cumsum(bumps)
        rank = newr
        if int(rank.max()) == n - 1:
            return order.astype(np.int64)
        k <<= 1


def suffix_array(text):
    """Suffix array over codes (terminator included), length n+1."""
    codes = text.codes
    if text.n <= 64 and text.sigma <= 255:
        return _sa_small(codes)
    return _sa_doubling(codes)


def bwt(text, sa=None):
    """Burrows-Wheeler transform as remapped codes (uint64)."""
    if sa is None:
        sa = suffix_array(text)
    idx = sa - 1
    idx[sa == 0] = len(text.codes) - 1
    return text.codes[idx].astype(np.uint64)


def lcp(text, sa=None):
    """LCP array: lcp[0] = 0, lcp[i] = overlap of suffixes sa[i-1], sa[i]."""
    if sa is None:
        sa = suffix_array(text)
    out = np.zeros(len(sa), np.int64)
    K.lcp_kasai(text.codes, np.asarray(sa, np.int64), out)
    return out.astype(np.uint64)


def psi(text, sa=None):
    """psi[i] = position in SA of the suffix one character shorter."""
    if sa is None:
        sa = suffix_array(text)
    n = len(sa)
    isa = np.empty(n, np.int64)
    isa[sa] = np.arange(n, dtype=np.int64)
    return isa[(sa + 1) % n].astype(np.uint64)


def suffix_profile_batch(texts, slen):
    """SA/BWT/LCP/psi for many equal-length code rows at once.

    texts: (count, slen) uint8 array of codes in 1..sigma (no terminator;
    one is implied per row). Returns four (count, slen+1) int32 arrays.
    """
    texts = np.ascontiguousarray(texts, np.uint8)
    count, got = texts.shape
    if got != slen:
        raise ValueError("row length mismatch")
    if slen > 64:
        raise ValueError("batch kernel handles strings up to 64 codes")
    m = slen + 1
    sa = np.empty((count, m), np.int32)
    bw = np.empty((count, m), np.int32)
    lc = np.empty((count, m), np.int32)
    ps = np.empty((count, m), np.int32)
    K.suffix_profile_batch(texts.reshape(-1), slen, count, sa.reshape(-1),
                           bw.reshape(-1), lc.reshape(-1), ps.reshape(-1))
    return sa, bw, lc, ps


def gen_sorted(n, max_value, seed):
    """Non-decreasing uniform draws from [0, max_value]."""
    out = splitmix_array(seed, n) % np.uint64(max_value + 1)
    out.sort()
    return out


def gen_uniform(n, max_value, seed):
    return splitmix_array(seed, n) % np.uint64(max_value + 1)


def gen_runs(n, max_value, seed, mean_run):
    """Repeat uniform draws in runs of mean length mean_run."""
    draws = splitmix_array(seed, 2 * max(1, (n + mean_run - 1) // mean_run) + 8)
    vals = []
    total = 0
    i = 0
    while total < n:
        v = int(draws[i] % np.uint64(max_value + 1))
        length = 1 + int(draws[i + 1] % np.uint64(2 * mean_run - 1))
        i += 2
        if i + 2 > len(draws):
            draws = np.concatenate(
                [draws, splitmix_array(seed + 1 + i, len(draws))])
        length = min(length, n - total)
        vals.append(np.full(length, v, np.uint64))
        total += length
    return np.concatenate(vals) if vals else np.zeros(0, np.uint64)


@dataclass(frozen=True)
class DatasetStats:
    n: int
    max_value: int
    avg_value: int          # rounded half up
    max_diff: int           # successive difference of largest magnitude
    runs: int


def stats(values):
    v = np.asarray(values, np.uint64)
    n = len(v)
    if n == 0:
        raise ValueError("stats need at least one value")
    mx = int(v.max())
    total = ((int((v >> np.uint64(32)).sum(dtype=np.uint64)) << 32)
             + int((v & np.uint64(0xFFFFFFFF)).sum(dtype=np.uint64)))
    avg = (2 * total + n) // (2 * n)
    if n == 1:
        md = 0
    elif mx < (1 << 63):
        d = np.diff(v.astype(np.int64))
        md = int(d[np.argmax(np.abs(d))])
    else:
        md = 0
        best = -1
        prev = int(v[0])
        for x in v[1:].tolist():
            dd = x - prev
            if abs(dd) > best:
                best = abs(dd)
                md = dd
            prev = x
    runs = 1 + int((v[1:] != v[:-1]).sum())
    return DatasetStats(n=n, max_value=mx, avg_value=avg, max_diff=md,
                        runs=runs)
