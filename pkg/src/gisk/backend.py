"""Kernel backend selection.

The compiled extension is preferred; the pure-Python twin is the fallback.
Set GISK_BACKEND=py or GISK_BACKEND=c to force one (c raises if the
extension is not built).
"""

import os

_forced = os.environ.get("GISK_BACKEND")

if _forced == "py":
    from . import _kernels_py as kernels

    BACKEND = "py"
else:
    try:
        from . import _kernels_cy as kernels  # type: ignore[no-redef]

        BACKEND = "c"
    except ImportError:
        if _forced == "c":
            raise
        from . import _kernels_py as kernels  # type: ignore[no-redef]

        BACKEND = "py"

real_roots = kernels.real_roots
chain_largest_roots = kernels.chain_largest_roots
sigma_table = kernels.sigma_table
