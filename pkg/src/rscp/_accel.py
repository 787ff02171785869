"""Optional numba acceleration with a pure-numpy escape hatch.

The compiled kernels are used whenever numba imports cleanly.  Setting
RSCP_PURE_NUMPY=1 forces the numpy code paths instead; the benchmark
flips the same switch to compare backends.
"""

import os

try:
    from numba import njit, prange
    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False
    prange = range

    def njit(*args, **kwargs):
        # no-op decorator so modules import unchanged without numba
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def wrap(func):
            return func
        return wrap

PURE_NUMPY = os.environ.get("RSCP_PURE_NUMPY", "").strip() not in ("", "0")


def use_numba() -> bool:
    """True when the compiled kernels are the active backend."""
    return HAS_NUMBA and not PURE_NUMPY


def active_backend() -> str:
    return "numba" if use_numba() else "numpy"
