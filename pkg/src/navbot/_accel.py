"""JIT switch for the numeric kernels.

Set ``NAVBOT_DISABLE_JIT=1`` before import to run every kernel through its
pure-numpy implementation instead of the numba-compiled loop.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

JIT_ENABLED = numba is not None and os.environ.get("NAVBOT_DISABLE_JIT", "0") not in ("1", "true", "yes")


def njit(fn):
    """Compile ``fn`` with numba when available, otherwise return it untouched."""
    if numba is None:  # pragma: no cover
        return fn
    return numba.njit(cache=True)(fn)


def select(jit_fn, numpy_fn):
    return jit_fn if JIT_ENABLED else numpy_fn
