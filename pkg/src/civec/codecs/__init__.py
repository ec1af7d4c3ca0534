"""Codec registry.

Eight storage families; six of them also come in a differential "_zz"
variant that codes zigzag-mapped successive differences (plain gains
nothing from it and run-length already exploits repeats directly).
"""

from .base import (CodecParams, Cursor, EncodedVector, SizeReport,
                   bit_lengths, plain_width, zigzag_map, zigzag_unmap,
                   zz_transform, zz_untransform)
from .dac import DacVector, plan_level_widths
from .elias import DeltaVector, GammaVector
from .fv import FvVector
from .pfd import PfdVector, choose_width
from .plain import PlainVector
from .rl import RlVector
from .simple9 import S9_COUNTS, S9_WIDTHS, Simple9Vector

FAMILIES = {
    "plain": PlainVector,
    "gamma": GammaVector,
    "delta": DeltaVector,
    "dac": DacVector,
    "fv": FvVector,
    "s9": Simple9Vector,
    "rl": RlVector,
    "pfd": PfdVector,
}

CODEC_IDS = (
    "plain", "gamma", "delta", "dac", "fv", "s9", "rl", "pfd",
    "gamma_zz", "delta_zz", "dac_zz", "fv_zz", "s9_zz", "pfd_zz",
)

COMPRESSED_IDS = tuple(c for c in CODEC_IDS if c != "plain")


def split_id(codec_id):
    if codec_id.endswith("_zz"):
        return codec_id[:-3], True
    return codec_id, False


def build(values, codec_id, *, sampling=None, dac_widths=None,
          pfd_block=128, pfd_exc_frac=0.10):
    """Encode values (non-negative ints) under the named codec."""
    base, zz = split_id(codec_id)
    if codec_id not in CODEC_IDS or base not in FAMILIES:
        raise ValueError(f"unknown codec {codec_id!r}")
    params = CodecParams(sampling=sampling, dac_widths=dac_widths,
                         pfd_block=pfd_block, pfd_exc_frac=pfd_exc_frac)
    return FAMILIES[base].build(values, params, zigzag=zz)
