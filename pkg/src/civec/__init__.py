"""Compressed integer vectors with uniform positioned access, plus the
dataset generators, workload drivers and hardware metering used to
compare them.
"""

from .bitio import BitBuffer, BitReader, words_for
from .codecs import (CODEC_IDS, COMPRESSED_IDS, CodecParams, EncodedVector,
                     SizeReport, build, plan_level_widths, zigzag_map,
                     zigzag_unmap)
from .container import (deserialize, read_ivec, read_vector, serialize,
                        write_ivec, write_vector)
from .kernels import BACKEND
from .sdvector import SparseBitvector

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BitBuffer", "BitReader", "CODEC_IDS", "COMPRESSED_IDS",
    "CodecParams", "EncodedVector", "SizeReport", "SparseBitvector",
    "build", "deserialize", "plan_level_widths", "read_ivec", "read_vector",
    "serialize", "words_for", "write_ivec", "write_vector", "zigzag_map",
    "zigzag_unmap", "__version__",
]
