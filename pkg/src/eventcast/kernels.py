"""Kernel backend selection.

The compiled extension is preferred when importable; setting
EVENTCAST_PURE=1 forces the pure-Python fallback. Both backends produce
bit-identical results, so the choice only affects speed.
"""

import os

from . import _kernels_py

_native = None
if os.environ.get("EVENTCAST_PURE", "") != "1":
    try:
        from . import _kernels as _native
    except ImportError:
        _native = None

_impl = _native if _native is not None else _kernels_py

BACKEND = "native" if _native is not None else "pure"
trace_table = _impl.trace_table
sample_symbols = _impl.sample_symbols
