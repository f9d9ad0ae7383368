"""Numba switch.

Set ``DEDEKIND_RESIDUE_NO_NUMBA=1`` to run every kernel through its pure
numpy/Python path instead of the compiled one.
"""
import os

DISABLED = os.environ.get("DEDEKIND_RESIDUE_NO_NUMBA", "").strip() not in ("", "0")

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None
    DISABLED = True

ENABLED = not DISABLED


def njit(func):
    """Compile ``func`` with numba when available, else return it untouched.

    ``fastmath`` stays off: it would let LLVM reassociate the Kahan
    compensation away.
    """
    if numba is None:
        return func
    return numba.njit(cache=True, nogil=True)(func)
