"""Kernel backend selection.

The compiled extension is preferred; the pure-Python reference takes over
when it is missing. ``CIVEC_BACKEND`` forces a choice: ``c``, ``py`` or
``auto`` (default).
"""

import os

from . import _pykernels

_choice = os.environ.get("CIVEC_BACKEND", "auto")
if _choice not in ("auto", "c", "py"):
    raise RuntimeError(f"CIVEC_BACKEND must be auto, c or py, not {_choice!r}")

_impl = _pykernels
BACKEND = "py"
if _choice in ("auto", "c"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "c"
    except ImportError:
        if _choice == "c":
            raise

# layout tables are backend-independent
S9_COUNTS = _pykernels.S9_COUNTS
S9_WIDTHS = _pykernels.S9_WIDTHS

read_bits = _impl.read_bits
write_bits = _impl.write_bits
get_bit = _impl.get_bit
pack_fixed_into = _impl.pack_fixed_into
unpack_fixed_run = _impl.unpack_fixed_run
pack_var_into = _impl.pack_var_into
gamma_encode_into = _impl.gamma_encode_into
gamma_decode_run = _impl.gamma_decode_run
delta_encode_into = _impl.delta_encode_into
delta_decode_run = _impl.delta_decode_run
rank1_bitmap = _impl.rank1_bitmap
ef_select1 = _impl.ef_select1
ef_rank1 = _impl.ef_rank1
s9_measure = _impl.s9_measure
s9_encode_into = _impl.s9_encode_into
s9_decode_run = _impl.s9_decode_run
pfd_block_bits = _impl.pfd_block_bits
pfd_decode_block = _impl.pfd_decode_block
dac_access = _impl.dac_access
dac_init_cursor = _impl.dac_init_cursor
dac_decode_run = _impl.dac_decode_run
fv_decode_run = _impl.fv_decode_run
zz_reduce = _impl.zz_reduce
lcp_kasai = _impl.lcp_kasai
suffix_profile_batch = _impl.suffix_profile_batch
