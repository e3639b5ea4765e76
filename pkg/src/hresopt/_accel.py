"""Numba switch.

Set ``HRESOPT_DISABLE_NUMBA=1`` to force the pure-numpy code paths, e.g. for
debugging or on platforms without an LLVM build of numba.
"""
import os

_FLAG = os.environ.get("HRESOPT_DISABLE_NUMBA", "").strip().lower()

try:
    import numba
    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and _FLAG not in ("1", "true", "yes", "on")


def njit(fn):
    """Compile ``fn`` with numba when available, else return it unchanged.

    The uncompiled function stays reachable as ``fn.py_func`` either way.
    """
    if not HAS_NUMBA:
        fn.py_func = fn
        return fn
    return numba.njit(cache=True, nogil=True, error_model="numpy")(fn)
