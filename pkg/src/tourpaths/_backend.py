"""Backend selection for the hot counting kernels.

``TOURPATHS_BACKEND=numpy`` forces the pure-numpy fallback; the default is
numba when it imports cleanly.  Both backends return identical results.
"""

import os

_requested = os.environ.get("TOURPATHS_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"TOURPATHS_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

if _requested == "numba":
    try:
        from . import _kernels_numba as kernels
        BACKEND = "numba"
    except ImportError:  # numba missing or broken
        from . import _kernels_numpy as kernels
        BACKEND = "numpy"
else:
    from . import _kernels_numpy as kernels
    BACKEND = "numpy"

__all__ = ["BACKEND", "kernels"]
