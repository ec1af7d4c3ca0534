"""Pure-Python reference kernels.

Every hot loop in the package goes through the functions in this module or
their compiled twins in ``_ckernels``.  Both backends operate on the same
numpy-backed structures and must produce bit-identical results; the parity
test compares them function by function.

Conventions shared by both backends:

* Bit streams live in little-endian ``uint64`` word arrays, LSB first within
  a word.  Every word array carries at least one zeroed guard word past its
  logical end so that 64-bit peeks never index out of bounds.
* Writers OR bits into pre-zeroed capacity; callers guarantee values fit the
  stated width.
* Elias-Fano high arrays pad the tail (bits past the logical length) with
  ones; dense rank bitmaps pad with zeros.  The scan loops rely on this.
"""

MASK64 = (1 << 64) - 1


def _popcount(x):
    return int(x).bit_count()


def _ctz(x):
    return (x & -x).bit_length() - 1


# -- raw bit I/O --------------------------------------------------------------


def read_bits(words, pos, width):
    if width == 0:
        return 0
    w = pos >> 6
    off = pos & 63
    val = int(words[w]) >> off
    if off + width > 64:
        val |= int(words[w + 1]) << (64 - off)
    return val & ((1 << width) - 1)


def write_bits(words, pos, value, width):
    if width == 0:
        return
    w = pos >> 6
    off = pos & 63
    words[w] |= (value << off) & MASK64
    if off + width > 64:
        words[w + 1] |= value >> (64 - off)


def get_bit(words, pos):
    return (int(words[pos >> 6]) >> (pos & 63)) & 1


def pack_fixed_into(values, width, words, pos):
    for v in values:
        write_bits(words, pos, int(v), width)
        pos += width
    return pos


def unpack_fixed_run(words, pos, width, count, out):
    for t in range(count):
        out[t] = read_bits(words, pos, width)
        pos += width
    return pos


def pack_var_into(values, widths, words, pos):
    for t in range(len(values)):
        w = int(widths[t])
        write_bits(words, pos, int(values[t]), w)
        pos += w
    return pos


# -- Elias gamma / delta codeword streams -------------------------------------


def gamma_encode_into(values, words, pos):
    for v in values:
        v = int(v)
        bl = v.bit_length()
        write_bits(words, pos, 1 << (bl - 1), bl)
        pos += bl
        write_bits(words, pos, v & ((1 << (bl - 1)) - 1), bl - 1)
        pos += bl - 1
    return pos


def gamma_decode_run(words, pos, count, out):
    for t in range(count):
        peek = read_bits(words, pos, 64)
        bl = _ctz(peek) + 1
        pos += bl
        out[t] = (1 << (bl - 1)) | read_bits(words, pos, bl - 1)
        pos += bl - 1
    return pos


def delta_encode_into(values, words, pos):
    for v in values:
        v = int(v)
        bl = v.bit_length()
        bl2 = bl.bit_length()
        write_bits(words, pos, 1 << (bl2 - 1), bl2)
        pos += bl2
        write_bits(words, pos, bl & ((1 << (bl2 - 1)) - 1), bl2 - 1)
        pos += bl2 - 1
        write_bits(words, pos, v & ((1 << (bl - 1)) - 1), bl - 1)
        pos += bl - 1
    return pos


def delta_decode_run(words, pos, count, out):
    for t in range(count):
        peek = read_bits(words, pos, 64)
        bl2 = _ctz(peek) + 1
        pos += bl2
        bl = (1 << (bl2 - 1)) | read_bits(words, pos, bl2 - 1)
        pos += bl2 - 1
        out[t] = (1 << (bl - 1)) | read_bits(words, pos, bl - 1)
        pos += bl - 1
    return pos


# -- dense bitmap rank (DAC continuation bitmaps) ------------------------------


def rank1_bitmap(words, word_base, rankdir, dir_base, k):
    """Set bits in [0, k) of the bitmap starting at word index ``word_base``.

    ``rankdir`` holds cumulative counts every 512 bits.
    """
    d = k >> 9
    cnt = int(rankdir[dir_base + d])
    wi = word_base + (d << 3)
    last = word_base + (k >> 6)
    while wi < last:
        cnt += _popcount(words[wi])
        wi += 1
    rem = k & 63
    if rem:
        cnt += _popcount(int(words[last]) & ((1 << rem) - 1))
    return cnt


# -- Elias-Fano select / rank --------------------------------------------------


def ef_select1(high, sel1, low, low_width, k):
    """Universe position of set bit #k (0-based)."""
    s = k >> 6
    p = int(sel1[s])
    remaining = k - (s << 6)
    if remaining:
        wi = p >> 6
        w = int(high[wi]) & ~((2 << (p & 63)) - 1)
        while True:
            pc = _popcount(w)
            if pc >= remaining:
                for _ in range(remaining - 1):
                    w &= w - 1
                p = (wi << 6) + _ctz(w)
                break
            remaining -= pc
            wi += 1
            w = int(high[wi])
    bucket = p - k
    if low_width == 0:
        return bucket
    return (bucket << low_width) | read_bits(low, k * low_width, low_width)


def ef_rank1(high, sel0, low, low_width, hb, lo):
    """Count of stored positions below bucket ``hb``, plus those inside it
    with a low part < ``lo``."""
    if hb == 0:
        pz = -1
    else:
        z = hb - 1
        s = z >> 6
        pz = int(sel0[s])
        remaining = z - (s << 6)
        if remaining:
            wi = pz >> 6
            w = ~int(high[wi]) & MASK64 & ~((2 << (pz & 63)) - 1)
            while True:
                pc = _popcount(w)
                if pc >= remaining:
                    for _ in range(remaining - 1):
                        w &= w - 1
                    pz = (wi << 6) + _ctz(w)
                    break
                remaining -= pc
                wi += 1
                w = ~int(high[wi]) & MASK64
    k = pz - hb + 1
    q = pz + 1
    while get_bit(high, q):
        if low_width and read_bits(low, k * low_width, low_width) >= lo:
            break
        if low_width == 0 and lo == 0:
            break
        k += 1
        q += 1
    return k


# -- Simple9 -------------------------------------------------------------------

S9_COUNTS = (28, 14, 9, 7, 5, 4, 3, 2, 1)
S9_WIDTHS = (1, 2, 3, 4, 5, 7, 9, 14, 28)


def _s9_pick(values, p, n):
    rem = n - p
    if rem < 28:
        # tail that fits one word: fewest lanes that still cover it
        for sel in range(8, -1, -1):
            if S9_COUNTS[sel] >= rem:
                lim = 1 << S9_WIDTHS[sel]
                if all(int(values[p + j]) < lim for j in range(rem)):
                    return sel, rem
                break
    for sel in range(9):
        k = min(S9_COUNTS[sel], rem)
        lim = 1 << S9_WIDTHS[sel]
        if all(int(values[p + j]) < lim for j in range(k)):
            return sel, k
    raise ValueError("simple9: value does not fit 28 bits")


def s9_measure(values):
    n = len(values)
    p = 0
    nwords = 0
    while p < n:
        _, k = _s9_pick(values, p, n)
        p += k
        nwords += 1
    return nwords


def s9_encode_into(values, out):
    n = len(values)
    p = 0
    wi = 0
    while p < n:
        sel, k = _s9_pick(values, p, n)
        word = sel
        width = S9_WIDTHS[sel]
        for j in range(k):
            word |= int(values[p + j]) << (4 + j * width)
        out[wi] = word
        wi += 1
        p += k
    return wi


def s9_decode_run(words, word_idx, elem_idx, count, out):
    t = 0
    while t < count:
        w = int(words[word_idx])
        c = S9_COUNTS[w & 15]
        width = S9_WIDTHS[w & 15]
        mask = (1 << width) - 1
        take = min(c - elem_idx, count - t)
        for j in range(take):
            out[t + j] = (w >> (4 + (elem_idx + j) * width)) & mask
        t += take
        elem_idx += take
        if elem_idx == c:
            elem_idx = 0
            word_idx += 1
    return word_idx, elem_idx


# -- PForDelta blocks ----------------------------------------------------------


def pfd_block_bits(words, off, c):
    b = read_bits(words, off, 7)
    e = read_bits(words, off + 7, 4)
    we = read_bits(words, off + 11, 7)
    return 18 + c * b + e * (7 + we)


def pfd_decode_block(words, off, c, out):
    b = read_bits(words, off, 7)
    e = read_bits(words, off + 7, 4)
    we = read_bits(words, off + 11, 7)
    off += 18
    for j in range(c):
        out[j] = read_bits(words, off, b)
        off += b
    epos = [0] * e
    for x in range(e):
        epos[x] = read_bits(words, off, 7)
        off += 7
    for x in range(e):
        out[epos[x]] = read_bits(words, off, we)
        off += we
    return off


# -- DAC level walks -----------------------------------------------------------


def dac_access(chunks, cbase, widths, bitmaps, bword, rankdir, rbase, nlevels, i):
    k = i
    val = 0
    shift = 0
    for l in range(nlevels):
        b = int(widths[l])
        val |= read_bits(chunks, int(cbase[l]) + k * b, b) << shift
        if l == nlevels - 1:
            break
        if not get_bit(bitmaps, (int(bword[l]) << 6) + k):
            break
        shift += b
        k = rank1_bitmap(bitmaps, int(bword[l]), rankdir, int(rbase[l]), k)
    return val


def dac_init_cursor(bitmaps, bword, rankdir, rbase, nlevels, i, kpos):
    kpos[0] = i
    for l in range(nlevels - 1):
        kpos[l + 1] = rank1_bitmap(
            bitmaps, int(bword[l]), rankdir, int(rbase[l]), int(kpos[l])
        )


def dac_decode_run(chunks, cbase, widths, bitmaps, bword, rankdir, rbase, nlevels, kpos, count, out):
    for t in range(count):
        k = int(kpos[0])
        kpos[0] = k + 1
        b = int(widths[0])
        val = read_bits(chunks, int(cbase[0]) + k * b, b)
        shift = b
        l = 0
        while l < nlevels - 1 and get_bit(bitmaps, (int(bword[l]) << 6) + k):
            l += 1
            k = int(kpos[l])
            kpos[l] = k + 1
            b = int(widths[l])
            val |= read_bits(chunks, int(cbase[l]) + k * b, b) << shift
            shift += b
        out[t] = val


# -- FV offset-indexed payload -------------------------------------------------


def fv_decode_run(payload, abs_words, abs_width, rel_words, rel_width,
                  sampling, total_bits, n, start, count, out):
    for t in range(count):
        i = start + t
        s = i // sampling
        o = (read_bits(abs_words, s * abs_width, abs_width)
             + read_bits(rel_words, i * rel_width, rel_width))
        if i + 1 == n:
            end = total_bits
        else:
            s2 = (i + 1) // sampling
            end = (read_bits(abs_words, s2 * abs_width, abs_width)
                   + read_bits(rel_words, (i + 1) * rel_width, rel_width))
        out[t] = read_bits(payload, o, end - o)


# -- zigzag accumulation -------------------------------------------------------


def zz_reduce(vals, count, running):
    """Fold ``count`` zigzagged deltas into a wrapping 64-bit running value."""
    for t in range(count):
        u = int(vals[t])
        if u & 1:
            running = (running - ((u + 1) >> 1)) & MASK64
        else:
            running = (running + (u >> 1)) & MASK64
    return running


# -- suffix structures ---------------------------------------------------------


def lcp_kasai(codes, sa, out):
    n = len(sa)
    isa = [0] * n
    for j in range(n):
        isa[int(sa[j])] = j
    h = 0
    out[0] = 0
    for i in range(n):
        r = isa[i]
        if r > 0:
            j = int(sa[r - 1])
            while i + h < n and j + h < n and codes[i + h] == codes[j + h]:
                h += 1
            out[r] = h
            if h:
                h -= 1
        else:
            h = 0


def suffix_profile_batch(flat, slen, count, sa_out, bwt_out, lcp_out, psi_out):
    """Suffix array, BWT, LCP and psi for ``count`` equal-length texts.

    ``flat`` holds the texts back to back (symbol codes >= 1); a terminator 0
    is appended internally, so each output row has ``slen + 1`` entries.
    """
    n = slen + 1
    for t in range(count):
        base = t * slen
        buf = [int(flat[base + j]) for j in range(slen)] + [0]
        sa = sorted(range(n), key=lambda i: buf[i:])
        isa = [0] * n
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
