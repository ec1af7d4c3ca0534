"""On-disk container for encoded vectors (and the plain .ivec array file).

Container layout (all integers little-endian):

    magic "CIV1" | family u8 | flags u8 (bit0 = differential) | n u64
    params u16 length + payload (codec-owned)
    component count u8, then per component: bit length u64, payload padded
    to a multiple of 8 bytes

The writer is deterministic: equal inputs produce identical bytes.

.ivec layout: magic "IVEC" | width u8 (8/16/32/64) | n u64 | packed values.
"""

import struct

import numpy as np

from .bitio import words_for
from .codecs import CODEC_IDS, FAMILIES, split_id

MAGIC = b"CIV1"
IVEC_MAGIC = b"IVEC"

_FAMILY_CODE = {name: i for i, name in enumerate(FAMILIES)}
_FAMILY_NAME = {i: name for name, i in _FAMILY_CODE.items()}


class FormatError(ValueError):
    pass


def _component_bytes(nbits, words):
    nw = (nbits + 63) // 64
    return np.ascontiguousarray(words[:nw]).tobytes()


def words_from_bytes(raw, nbits):
    """Rebuild a word array with guard space from trimmed payload bytes."""
    need = words_for(nbits)
    buf = np.zeros(need, np.uint64)
    got = np.frombuffer(raw, np.uint64)
    buf[:len(got)] = got
    return buf


def serialize(vec):
    base, zz = split_id(vec.codec_id)
    head = MAGIC + struct.pack("<BBQ", _FAMILY_CODE[base], 1 if zz else 0,
                               vec.n)
    params = vec.params_bytes()
    out = [head, struct.pack("<H", len(params)), params]
    comps = vec.components()
    out.append(struct.pack("<B", len(comps)))
    for nbits, words in comps:
        out.append(struct.pack("<Q", int(nbits)))
        out.append(_component_bytes(int(nbits), words))
    return b"".join(out)


def deserialize(data):
    from .codecs.base import CodecParams
    data = bytes(data)
    if data[:4] != MAGIC:
        raise FormatError("not a CIV1 container")

    def take(fmt, off):
        end = off + struct.calcsize(fmt)
        if end > len(data):
            raise FormatError("truncated container")
        return struct.unpack_from(fmt, data, off) + (end,)

    fam_code, flags, n, off = take("<BBQ", 4)
    if fam_code not in _FAMILY_NAME:
        raise FormatError(f"unknown codec family code {fam_code}")
    zz = bool(flags & 1)
    plen, off = take("<H", off)
    if off + plen > len(data):
        raise FormatError("truncated container")
    raw_params = data[off:off + plen]
    off += plen
    ncomp, off = take("<B", off)
    comps = []
    for _ in range(ncomp):
        nbits, off = take("<Q", off)
        nbytes = ((nbits + 63) // 64) * 8
        if off + nbytes > len(data):
            raise FormatError("truncated container")
        comps.append((int(nbits), words_from_bytes(data[off:off + nbytes],
                                                   int(nbits))))
        off += nbytes
    name = _FAMILY_NAME[fam_code]
    cls = FAMILIES[name]
    return cls.from_parts(n, zz, raw_params, comps, CodecParams())


def write_vector(path, vec):
    with open(path, "wb") as f:
        f.write(serialize(vec))


def read_vector(path):
    with open(path, "rb") as f:
        return deserialize(f.read())


_IVEC_DTYPES = {8: np.uint8, 16: np.uint16, 32: np.uint32, 64: np.uint64}


def write_ivec(path, values):
    from .codecs import plain_width
    v = np.asarray(values, np.uint64)
    w = plain_width(int(v.max()) if len(v) else 0)
    with open(path, "wb") as f:
        f.write(IVEC_MAGIC + struct.pack("<BQ", w, len(v)))
        f.write(v.astype(_IVEC_DTYPES[w]).tobytes())


def read_ivec(path):
    with open(path, "rb") as f:
        data = f.read()
    if data[:4] != IVEC_MAGIC:
        raise FormatError("not an IVEC file")
    if len(data) < 13:
        raise FormatError("truncated IVEC file")
    w, n = struct.unpack_from("<BQ", data, 4)
    if w not in _IVEC_DTYPES:
        raise FormatError(f"bad width {w}")
    if len(data) < 13 + n * (w // 8):
        raise FormatError("truncated IVEC file")
    arr = np.frombuffer(data, _IVEC_DTYPES[w], count=n, offset=13)
    return arr.astype(np.uint64)
