"""Select the compiled broad-phase kernels when available.

Set SLOPEDRAW_KERNEL=py to force the pure-Python fallback (used by the
benchmark and the equivalence tests).
"""

from __future__ import annotations

import os

from . import _kernels_py

KERNEL_IMPL = "py"
sweep_pairs = _kernels_py.sweep_pairs
disjoint_filter = _kernels_py.disjoint_filter
straddle_filter = _kernels_py.straddle_filter

if os.environ.get("SLOPEDRAW_KERNEL", "") != "py":
    try:
        from . import _kernels as _c

        sweep_pairs = _c.sweep_pairs
        disjoint_filter = _c.disjoint_filter
        straddle_filter = _c.straddle_filter
        KERNEL_IMPL = "c"
    except ImportError:
        pass


def get_impl(name: str):
    """Explicit implementation picker for benchmarks and tests."""
    if name == "py":
        return _kernels_py
    from . import _kernels as _c

    return _c
