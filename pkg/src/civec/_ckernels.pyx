# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Semantics are defined by ``_pykernels``; keep in sync."""

from libc.stdint cimport int32_t, int64_t, uint8_t, uint32_t, uint64_t

import numpy as np

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_clzll(unsigned long long) nogil
    int __builtin_popcountll(unsigned long long) nogil

cdef uint64_t ALL1 = <uint64_t>0xFFFFFFFFFFFFFFFF


cdef inline int _bitlen(uint64_t v) nogil:
    return 64 - __builtin_clzll(v)


cdef inline uint64_t _mask(int width) nogil:
    if width >= 64:
        return ALL1
    return (<uint64_t>1 << width) - 1


cdef inline uint64_t _read(const uint64_t* w, int64_t pos, int width) nogil:
    cdef int64_t wi
    cdef int off
    cdef uint64_t val
    if width == 0:
        return 0
    wi = pos >> 6
    off = <int>(pos & 63)
    val = w[wi] >> off
    if off + width > 64:
        val |= w[wi + 1] << (64 - off)
    return val & _mask(width)


cdef inline void _write(uint64_t* w, int64_t pos, uint64_t value, int width) nogil:
    cdef int64_t wi
    cdef int off
    if width == 0:
        return
    wi = pos >> 6
    off = <int>(pos & 63)
    w[wi] |= value << off
    if off + width > 64:
        w[wi + 1] |= value >> (64 - off)


# -- raw bit I/O --------------------------------------------------------------


def read_bits(const uint64_t[::1] words, int64_t pos, int width):
    return _read(&words[0], pos, width)


def write_bits(uint64_t[::1] words, int64_t pos, object value, int width):
    _write(&words[0], pos, <uint64_t>value, width)


def get_bit(const uint64_t[::1] words, int64_t pos):
    return <int>((words[pos >> 6] >> <int>(pos & 63)) & 1)


def pack_fixed_into(const uint64_t[::1] values, int width, uint64_t[::1] words,
                    int64_t pos):
    cdef int64_t t
    cdef uint64_t* w = &words[0]
    for t in range(values.shape[0]):
        _write(w, pos, values[t], width)
        pos += width
    return pos


def unpack_fixed_run(const uint64_t[::1] words, int64_t pos, int width,
                     int64_t count, uint64_t[::1] out):
    cdef int64_t t
    cdef const uint64_t* w = &words[0]
    for t in range(count):
        out[t] = _read(w, pos, width)
        pos += width
    return pos


def pack_var_into(const uint64_t[::1] values, const uint8_t[::1] widths,
                  uint64_t[::1] words, int64_t pos):
    cdef int64_t t
    cdef int wd
    cdef uint64_t* w = &words[0]
    for t in range(values.shape[0]):
        wd = widths[t]
        _write(w, pos, values[t], wd)
        pos += wd
    return pos


# -- Elias gamma / delta codeword streams -------------------------------------


def gamma_encode_into(const uint64_t[::1] values, uint64_t[::1] words,
                      int64_t pos):
    cdef int64_t t
    cdef int bl
    cdef uint64_t v
    cdef uint64_t* w = &words[0]
    for t in range(values.shape[0]):
        v = values[t]
        bl = _bitlen(v)
        _write(w, pos, <uint64_t>1 << (bl - 1), bl)
        pos += bl
        _write(w, pos, v & _mask(bl - 1), bl - 1)
        pos += bl - 1
    return pos


def gamma_decode_run(const uint64_t[::1] words, int64_t pos, int64_t count,
                     uint64_t[::1] out):
    cdef int64_t t
    cdef int bl
    cdef const uint64_t* w = &words[0]
    for t in range(count):
        bl = __builtin_ctzll(_read(w, pos, 64)) + 1
        pos += bl
        out[t] = (<uint64_t>1 << (bl - 1)) | _read(w, pos, bl - 1)
        pos += bl - 1
    return pos


def delta_encode_into(const uint64_t[::1] values, uint64_t[::1] words,
                      int64_t pos):
    cdef int64_t t
    cdef int bl, bl2
    cdef uint64_t v
    cdef uint64_t* w = &words[0]
    for t in range(values.shape[0]):
        v = values[t]
        bl = _bitlen(v)
        bl2 = _bitlen(<uint64_t>bl)
        _write(w, pos, <uint64_t>1 << (bl2 - 1), bl2)
        pos += bl2
        _write(w, pos, <uint64_t>bl & _mask(bl2 - 1), bl2 - 1)
        pos += bl2 - 1
        _write(w, pos, v & _mask(bl - 1), bl - 1)
        pos += bl - 1
    return pos


def delta_decode_run(const uint64_t[::1] words, int64_t pos, int64_t count,
                     uint64_t[::1] out):
    cdef int64_t t
    cdef int bl, bl2
    cdef const uint64_t* w = &words[0]
    for t in range(count):
        bl2 = __builtin_ctzll(_read(w, pos, 64)) + 1
        pos += bl2
        bl = <int>((<uint64_t>1 << (bl2 - 1)) | _read(w, pos, bl2 - 1))
        pos += bl2 - 1
        out[t] = (<uint64_t>1 << (bl - 1)) | _read(w, pos, bl - 1)
        pos += bl - 1
    return pos


# -- dense bitmap rank ---------------------------------------------------------


cdef inline int64_t _rank1_bitmap(const uint64_t* words, int64_t word_base,
                                  const uint64_t* rankdir, int64_t dir_base,
                                  int64_t k) nogil:
    cdef int64_t d = k >> 9
    cdef int64_t cnt = <int64_t>rankdir[dir_base + d]
    cdef int64_t wi = word_base + (d << 3)
    cdef int64_t last = word_base + (k >> 6)
    cdef int rem
    while wi < last:
        cnt += __builtin_popcountll(words[wi])
        wi += 1
    rem = <int>(k & 63)
    if rem:
        cnt += __builtin_popcountll(words[last] & (((<uint64_t>1) << rem) - 1))
    return cnt


def rank1_bitmap(const uint64_t[::1] words, int64_t word_base,
                 const uint64_t[::1] rankdir, int64_t dir_base, int64_t k):
    return _rank1_bitmap(&words[0], word_base, &rankdir[0], dir_base, k)


# -- Elias-Fano select / rank --------------------------------------------------


def ef_select1(const uint64_t[::1] high, const uint64_t[::1] sel1,
               const uint64_t[::1] low, int low_width, int64_t k):
    cdef int64_t s = k >> 6
    cdef int64_t p = <int64_t>sel1[s]
    cdef int64_t remaining = k - (s << 6)
    cdef int64_t wi
    cdef uint64_t w
    cdef int pc, j
    cdef int64_t bucket
    if remaining:
        wi = p >> 6
        w = high[wi] & ~((((<uint64_t>2) << <int>(p & 63))) - 1)
        while True:
            pc = __builtin_popcountll(w)
            if pc >= remaining:
                for j in range(<int>remaining - 1):
                    w &= w - 1
                p = (wi << 6) + __builtin_ctzll(w)
                break
            remaining -= pc
            wi += 1
            w = high[wi]
    bucket = p - k
    if low_width == 0:
        return bucket
    return (bucket << low_width) | <int64_t>_read(&low[0], k * low_width, low_width)


def ef_rank1(const uint64_t[::1] high, const uint64_t[::1] sel0,
             const uint64_t[::1] low, int low_width, int64_t hb, uint64_t lo):
    cdef int64_t pz, z, s, wi, k, q
    cdef int64_t remaining
    cdef uint64_t w, lw
    cdef int pc, j
    if hb == 0:
        pz = -1
    else:
        z = hb - 1
        s = z >> 6
        pz = <int64_t>sel0[s]
        remaining = z - (s << 6)
        if remaining:
            wi = pz >> 6
            w = (~high[wi]) & ~((((<uint64_t>2) << <int>(pz & 63))) - 1)
            while True:
                pc = __builtin_popcountll(w)
                if pc >= remaining:
                    for j in range(<int>remaining - 1):
                        w &= w - 1
                    pz = (wi << 6) + __builtin_ctzll(w)
                    break
                remaining -= pc
                wi += 1
                w = ~high[wi]
    k = pz - hb + 1
    q = pz + 1
    while (high[q >> 6] >> <int>(q & 63)) & 1:
        lw = _read(&low[0], k * low_width, low_width) if low_width else 0
        if lw >= lo:
            break
        k += 1
        q += 1
    return k


# -- Simple9 -------------------------------------------------------------------

cdef int[9] S9_COUNTS_C = [28, 14, 9, 7, 5, 4, 3, 2, 1]
cdef int[9] S9_WIDTHS_C = [1, 2, 3, 4, 5, 7, 9, 14, 28]


cdef inline int _s9_pick(const uint64_t* v, int64_t p, int64_t n, int* k_out) nogil:
    cdef int64_t rem = n - p
    cdef int sel, k, j
    cdef uint64_t lim
    cdef bint ok
    if rem < 28:
        for sel in range(8, -1, -1):
            if S9_COUNTS_C[sel] >= rem:
                lim = (<uint64_t>1) << S9_WIDTHS_C[sel]
                ok = True
                for j in range(<int>rem):
                    if v[p + j] >= lim:
                        ok = False
                        break
                if ok:
                    k_out[0] = <int>rem
                    return sel
                break
    for sel in range(9):
        k = S9_COUNTS_C[sel]
        if k > rem:
            k = <int>rem
        lim = (<uint64_t>1) << S9_WIDTHS_C[sel]
        ok = True
        for j in range(k):
            if v[p + j] >= lim:
                ok = False
                break
        if ok:
            k_out[0] = k
            return sel
    return -1


def s9_measure(const uint64_t[::1] values):
    cdef int64_t n = values.shape[0]
    cdef int64_t p = 0, nwords = 0
    cdef int sel, k
    while p < n:
        sel = _s9_pick(&values[0], p, n, &k)
        if sel < 0:
            raise ValueError("simple9: value does not fit 28 bits")
        p += k
        nwords += 1
    return nwords


def s9_encode_into(const uint64_t[::1] values, uint32_t[::1] out):
    cdef int64_t n = values.shape[0]
    cdef int64_t p = 0, wi = 0
    cdef int sel, k, j, width
    cdef uint32_t word
    while p < n:
        sel = _s9_pick(&values[0], p, n, &k)
        if sel < 0:
            raise ValueError("simple9: value does not fit 28 bits")
        word = <uint32_t>sel
        width = S9_WIDTHS_C[sel]
        for j in range(k):
            word |= (<uint32_t>values[p + j]) << (4 + j * width)
        out[wi] = word
        wi += 1
        p += k
    return wi


def s9_decode_run(const uint32_t[::1] words, int64_t word_idx, int elem_idx,
                  int64_t count, uint64_t[::1] out):
    cdef int64_t t = 0
    cdef uint32_t w, mask
    cdef int c, width, take, j
    while t < count:
        w = words[word_idx]
        c = S9_COUNTS_C[w & 15]
        width = S9_WIDTHS_C[w & 15]
        mask = <uint32_t>(((<uint64_t>1) << width) - 1)
        take = c - elem_idx
        if take > count - t:
            take = <int>(count - t)
        for j in range(take):
            out[t + j] = (w >> (4 + (elem_idx + j) * width)) & mask
        t += take
        elem_idx += take
        if elem_idx == c:
            elem_idx = 0
            word_idx += 1
    return word_idx, elem_idx


# -- PForDelta blocks ----------------------------------------------------------


def pfd_block_bits(const uint64_t[::1] words, int64_t off, int64_t c):
    cdef const uint64_t* w = &words[0]
    cdef int b = <int>_read(w, off, 7)
    cdef int e = <int>_read(w, off + 7, 4)
    cdef int we = <int>_read(w, off + 11, 7)
    return 18 + c * b + e * (7 + we)


def pfd_decode_block(const uint64_t[::1] words, int64_t off, int64_t c,
                     uint64_t[::1] out):
    cdef const uint64_t* w = &words[0]
    cdef int b = <int>_read(w, off, 7)
    cdef int e = <int>_read(w, off + 7, 4)
    cdef int we = <int>_read(w, off + 11, 7)
    cdef int64_t j
    cdef int x
    cdef int epos[16]
    off += 18
    for j in range(c):
        out[j] = _read(w, off, b)
        off += b
    for x in range(e):
        epos[x] = <int>_read(w, off, 7)
        off += 7
    for x in range(e):
        out[epos[x]] = _read(w, off, we)
        off += we
    return off


# -- DAC level walks -----------------------------------------------------------


def dac_access(const uint64_t[::1] chunks, const int64_t[::1] cbase,
               const uint8_t[::1] widths, const uint64_t[::1] bitmaps,
               const int64_t[::1] bword, const uint64_t[::1] rankdir,
               const int64_t[::1] rbase, int nlevels, int64_t i):
    cdef int64_t k = i
    cdef uint64_t val = 0
    cdef int shift = 0
    cdef int l, b
    cdef const uint64_t* cw = &chunks[0]
    cdef const uint64_t* bm = &bitmaps[0]
    cdef const uint64_t* rd = &rankdir[0]
    for l in range(nlevels):
        b = widths[l]
        val |= _read(cw, cbase[l] + k * b, b) << shift
        if l == nlevels - 1:
            break
        if not (bm[((bword[l] << 6) + k) >> 6] >> <int>(k & 63)) & 1:
            break
        shift += b
        k = _rank1_bitmap(bm, bword[l], rd, rbase[l], k)
    return val


def dac_init_cursor(const uint64_t[::1] bitmaps, const int64_t[::1] bword,
                    const uint64_t[::1] rankdir, const int64_t[::1] rbase,
                    int nlevels, int64_t i, int64_t[::1] kpos):
    cdef int l
    kpos[0] = i
    for l in range(nlevels - 1):
        kpos[l + 1] = _rank1_bitmap(&bitmaps[0], bword[l], &rankdir[0],
                                    rbase[l], kpos[l])


def dac_decode_run(const uint64_t[::1] chunks, const int64_t[::1] cbase,
                   const uint8_t[::1] widths, const uint64_t[::1] bitmaps,
                   const int64_t[::1] bword, const uint64_t[::1] rankdir,
                   const int64_t[::1] rbase, int nlevels, int64_t[::1] kpos,
                   int64_t count, uint64_t[::1] out):
    cdef int64_t t, k, bitpos
    cdef uint64_t val
    cdef int shift, l, b
    cdef const uint64_t* cw = &chunks[0]
    cdef const uint64_t* bm = &bitmaps[0]
    for t in range(count):
        k = kpos[0]
        kpos[0] = k + 1
        b = widths[0]
        val = _read(cw, cbase[0] + k * b, b)
        shift = b
        l = 0
        while l < nlevels - 1:
            bitpos = (bword[l] << 6) + k
            if not (bm[bitpos >> 6] >> <int>(bitpos & 63)) & 1:
                break
            l += 1
            k = kpos[l]
            kpos[l] = k + 1
            b = widths[l]
            val |= _read(cw, cbase[l] + k * b, b) << shift
            shift += b
        out[t] = val


# -- FV offset-indexed payload -------------------------------------------------


def fv_decode_run(const uint64_t[::1] payload, const uint64_t[::1] abs_words,
                  int abs_width, const uint64_t[::1] rel_words, int rel_width,
                  int64_t sampling, int64_t total_bits, int64_t n,
                  int64_t start, int64_t count, uint64_t[::1] out):
    cdef int64_t t, i, s, s2, o, end
    cdef const uint64_t* pw = &payload[0]
    cdef const uint64_t* aw = &abs_words[0]
    cdef const uint64_t* rw = &rel_words[0]
    for t in range(count):
        i = start + t
        s = i // sampling
        o = (<int64_t>_read(aw, s * abs_width, abs_width)
             + <int64_t>_read(rw, i * rel_width, rel_width))
        if i + 1 == n:
            end = total_bits
        else:
            s2 = (i + 1) // sampling
            end = (<int64_t>_read(aw, s2 * abs_width, abs_width)
                   + <int64_t>_read(rw, (i + 1) * rel_width, rel_width))
        out[t] = _read(pw, o, <int>(end - o))


# -- zigzag accumulation -------------------------------------------------------


def zz_reduce(const uint64_t[::1] vals, int64_t count, object running):
    cdef uint64_t r = <uint64_t>running
    cdef uint64_t u
    cdef int64_t t
    for t in range(count):
        u = vals[t]
        if u & 1:
            r -= (u + 1) >> 1
        else:
            r += u >> 1
    return r


# -- suffix structures ---------------------------------------------------------


def lcp_kasai(const int32_t[::1] codes, const int64_t[::1] sa,
              int64_t[::1] out):
    cdef int64_t n = sa.shape[0]
    cdef int64_t[::1] isa = np.empty(n, dtype=np.int64)
    cdef int64_t i, j, h, r
    for j in range(n):
        isa[sa[j]] = j
    h = 0
    out[0] = 0
    for i in range(n):
        r = isa[i]
        if r > 0:
            j = sa[r - 1]
            while i + h < n and j + h < n and codes[i + h] == codes[j + h]:
                h += 1
            out[r] = h
            if h:
                h -= 1
        else:
            h = 0


cdef inline bint _suf_less(const uint8_t* buf, int a, int b) nogil:
    while buf[a] == buf[b]:
        a += 1
        b += 1
    return buf[a] < buf[b]


def suffix_profile_batch(const uint8_t[::1] flat, int slen, int64_t count,
                         int32_t[::1] sa_out, int32_t[::1] bwt_out,
                         int32_t[::1] lcp_out, int32_t[::1] psi_out):
    cdef uint8_t buf[65]
    cdef int32_t sa[65]
    cdef int32_t isa[65]
    cdef int n = slen + 1
    cdef int64_t t, base, row
    cdef int i, j, key, prev, h
    if slen > 64:
        raise ValueError("suffix_profile_batch handles lengths up to 64")
    for t in range(count):
        base = t * slen
        for j in range(slen):
            buf[j] = flat[base + j]
        buf[slen] = 0
        sa[0] = 0
        for i in range(1, n):
            key = i
            j = i - 1
            while j >= 0 and _suf_less(buf, key, sa[j]):
                sa[j + 1] = sa[j]
                j -= 1
            sa[j + 1] = key
        for j in range(n):
            isa[sa[j]] = j
        row = t * n
        prev = -1
        for j in range(n):
            i = sa[j]
            sa_out[row + j] = i
            bwt_out[row + j] = buf[i - 1] if i else buf[n - 1]
            psi_out[row + j] = isa[(i + 1) % n]
            if j == 0:
                lcp_out[row] = 0
            else:
                h = 0
                while buf[prev + h] == buf[i + h]:
                    h += 1
                lcp_out[row + j] = h
            prev = i
