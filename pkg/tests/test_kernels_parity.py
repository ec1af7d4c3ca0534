"""Compiled and pure-Python kernels must agree bit for bit.

Each check feeds identical inputs to both backends and compares every
output array and return value. Skipped when the extension is not built.
"""

import numpy as np
import pytest

from civec import _pykernels as pk
from civec import build
from civec.bitio import words_for
from civec.datasets import TextInput, suffix_array
from civec.rng import splitmix_array
from civec.sdvector import SparseBitvector

ck = pytest.importorskip("civec._ckernels")

U64 = np.uint64


def rand_values(seed, n, bits):
    return splitmix_array(seed, n) >> np.uint64(64 - bits)


def test_fixed_width_packing():
    for seed, width in ((1, 1), (2, 7), (3, 33), (4, 64)):
        vals = rand_values(seed, 257, width)
        nbits = width * len(vals) + 11
        wa = np.zeros(words_for(nbits), U64)
        wb = np.zeros(words_for(nbits), U64)
        ea = pk.pack_fixed_into(vals, width, wa, 11)
        eb = ck.pack_fixed_into(vals, width, wb, 11)
        assert ea == eb
        assert np.array_equal(wa, wb)
        oa = np.zeros(len(vals), U64)
        ob = np.zeros(len(vals), U64)
        assert pk.unpack_fixed_run(wa, 11, width, len(vals), oa) \
            == ck.unpack_fixed_run(wa, 11, width, len(vals), ob)
        assert np.array_equal(oa, ob)
        assert np.array_equal(oa, vals)


def test_bit_primitives():
    words = splitmix_array(9, 40)
    for pos, width in ((0, 64), (3, 61), (77, 13), (100, 1), (64, 0)):
        assert pk.read_bits(words, pos, width) == ck.read_bits(words, pos, width)
    for pos in (0, 1, 63, 64, 1000):
        assert pk.get_bit(words, pos) == ck.get_bit(words, pos)
    wa = words.copy()
    wb = words.copy()
    pk.write_bits(wa, 130, 0x5A5A, 16)
    ck.write_bits(wb, 130, 0x5A5A, 16)
    assert np.array_equal(wa, wb)


def test_variable_width_packing():
    vals = rand_values(5, 300, 64)
    widths = np.maximum(
        (splitmix_array(6, 300) % np.uint64(64)).astype(np.uint8), 1)
    vals = vals >> (np.uint64(64) - widths.astype(U64))
    nbits = int(widths.astype(np.int64).sum())
    wa = np.zeros(words_for(nbits + 5), U64)
    wb = wa.copy()
    assert pk.pack_var_into(vals, widths, wa, 5) \
        == ck.pack_var_into(vals, widths, wb, 5)
    assert np.array_equal(wa, wb)


def test_elias_codecs():
    vals = rand_values(7, 400, 40) + np.uint64(1)
    for enc_p, enc_c, dec_p, dec_c in (
        (pk.gamma_encode_into, ck.gamma_encode_into,
         pk.gamma_decode_run, ck.gamma_decode_run),
        (pk.delta_encode_into, ck.delta_encode_into,
         pk.delta_decode_run, ck.delta_decode_run),
    ):
        wa = np.zeros(words_for(130 * len(vals)), U64)
        wb = wa.copy()
        ea = enc_p(vals, wa, 3)
        eb = enc_c(vals, wb, 3)
        assert ea == eb
        assert np.array_equal(wa, wb)
        oa = np.zeros(len(vals), U64)
        ob = np.zeros(len(vals), U64)
        assert dec_p(wa, 3, len(vals), oa) == dec_c(wa, 3, len(vals), ob)
        assert np.array_equal(oa, vals)
        assert np.array_equal(ob, vals)


def test_sparse_bitvector_kernels():
    pos = np.flatnonzero(splitmix_array(11, 5000) % np.uint64(7) == 0)
    bv = SparseBitvector(pos.astype(U64), 5000)
    r = len(pos)
    for k in range(r):
        assert pk.ef_select1(bv.high, bv.sel1, bv.low, bv.low_width, k) \
            == ck.ef_select1(bv.high, bv.sel1, bv.low, bv.low_width, k)
    for i in range(0, 5000, 17):
        hb, lo = i >> bv.low_width, i & ((1 << bv.low_width) - 1)
        assert pk.ef_rank1(bv.high, bv.sel0, bv.low, bv.low_width, hb, lo) \
            == ck.ef_rank1(bv.high, bv.sel0, bv.low, bv.low_width, hb, lo)


def test_rank_directory_kernel():
    bits = splitmix_array(13, 64)
    rdir = np.zeros(9, U64)
    counts = np.cumsum([int(w).bit_count() for w in bits])
    rdir[1:] = counts[7::8]
    for k in range(0, 64 * 64, 37):
        assert pk.rank1_bitmap(bits, 0, rdir, 0, k) \
            == ck.rank1_bitmap(bits, 0, rdir, 0, k)


def test_simple9_kernels():
    vals = splitmix_array(15, 1000) % np.uint64(1 << 28)
    vals[::7] %= np.uint64(4)  # mix in dense low-width stretches
    assert pk.s9_measure(vals) == ck.s9_measure(vals)
    nw = pk.s9_measure(vals)
    oa = np.zeros(nw, np.uint32)
    ob = np.zeros(nw, np.uint32)
    assert pk.s9_encode_into(vals, oa) == ck.s9_encode_into(vals, ob)
    assert np.array_equal(oa, ob)
    da = np.zeros(len(vals), U64)
    db = np.zeros(len(vals), U64)
    assert pk.s9_decode_run(oa, 0, 0, len(vals), da) \
        == ck.s9_decode_run(oa, 0, 0, len(vals), db)
    assert np.array_equal(da, vals)
    assert np.array_equal(db, vals)
    # mid-word resume
    wi, ei = pk.s9_decode_run(oa, 0, 0, 3, da)
    assert (wi, ei) == ck.s9_decode_run(oa, 0, 0, 3, db)
    assert pk.s9_decode_run(oa, wi, ei, 5, da) \
        == ck.s9_decode_run(oa, wi, ei, 5, db)
    assert np.array_equal(da[:5], db[:5])


def test_pfd_kernels():
    vals = splitmix_array(17, 512) % np.uint64(1 << 9)
    vals[::13] <<= np.uint64(20)  # exceptions
    vec = build(vals, "pfd")
    off = 0
    out_a = np.zeros(128, U64)
    out_b = np.zeros(128, U64)
    for blk in range(4):
        assert pk.pfd_block_bits(vec.payload, off, 128) \
            == ck.pfd_block_bits(vec.payload, off, 128)
        ea = pk.pfd_decode_block(vec.payload, off, 128, out_a)
        eb = ck.pfd_decode_block(vec.payload, off, 128, out_b)
        assert ea == eb
        assert np.array_equal(out_a, out_b)
        assert np.array_equal(out_a, vals[blk * 128:(blk + 1) * 128])
        off = ea


def test_dac_kernels():
    vals = splitmix_array(19, 700) % np.uint64(1 << 30)
    vals[::3] %= np.uint64(200)
    vec = build(vals, "dac")
    args = (vec.chunks, vec.cbase, vec._warr, vec.bitmaps, vec.bword,
            vec.rankdir, vec.rbase, vec.nlevels)
    for i in range(0, 700, 11):
        assert pk.dac_access(*args, i) == ck.dac_access(*args, i) == vals[i]
    ka = np.zeros(vec.nlevels, np.int64)
    kb = np.zeros(vec.nlevels, np.int64)
    tail = (vec.bitmaps, vec.bword, vec.rankdir, vec.rbase, vec.nlevels)
    pk.dac_init_cursor(*tail, 123, ka)
    ck.dac_init_cursor(*tail, 123, kb)
    assert np.array_equal(ka, kb)
    oa = np.zeros(300, U64)
    ob = np.zeros(300, U64)
    pk.dac_decode_run(*args, ka, 300, oa)
    ck.dac_decode_run(*args, kb, 300, ob)
    assert np.array_equal(oa, ob)
    assert np.array_equal(oa, vals[123:423])
    assert np.array_equal(ka, kb)


def test_fv_kernel():
    vals = splitmix_array(21, 900) % np.uint64(1 << 22)
    vec = build(vals, "fv")
    oa = np.zeros(500, U64)
    ob = np.zeros(500, U64)
    for fn, out in ((pk.fv_decode_run, oa), (ck.fv_decode_run, ob)):
        fn(vec.payload, vec.abs_words, vec.abs_width, vec.rel_words,
           vec.rel_width, vec.h, vec.payload_bits, vec.n, 137, 500, out)
    assert np.array_equal(oa, ob)
    assert np.array_equal(oa - np.uint64(1), vals[137:637])


def test_zigzag_fold():
    deltas = splitmix_array(23, 64) % np.uint64(4000)
    for count in (0, 1, 17, 64):
        assert pk.zz_reduce(deltas, count, 123456) \
            == ck.zz_reduce(deltas, count, 123456)


def test_suffix_kernels():
    text = TextInput(bytes((splitmix_array(25, 60) % np.uint64(4) + 97)
                           .astype(np.uint8)))
    sa = suffix_array(text).astype(np.int64)
    n = text.n + 1
    oa = np.zeros(n, np.int64)
    ob = np.zeros(n, np.int64)
    pk.lcp_kasai(text.codes, sa, oa)
    ck.lcp_kasai(text.codes, sa, ob)
    assert np.array_equal(oa, ob)

    count, slen = 40, 9
    # rows hold slen codes each; the kernels append the terminator themselves
    flat = (splitmix_array(27, count * slen) % np.uint64(3) + 1) \
        .astype(np.uint8)
    outs_a = [np.zeros(count * (slen + 1), np.int32) for _ in range(4)]
    outs_b = [np.zeros(count * (slen + 1), np.int32) for _ in range(4)]
    pk.suffix_profile_batch(flat, slen, count, *outs_a)
    ck.suffix_profile_batch(flat, slen, count, *outs_b)
    for a, b in zip(outs_a, outs_b):
        assert np.array_equal(a, b)
