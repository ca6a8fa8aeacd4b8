"""Backend selection for the hot kernels.

Set ``AFFINITY_CA_BACKEND=numpy`` to bypass numba entirely and run the
vectorized numpy kernels instead. The default is ``numba`` whenever the
package imports cleanly; otherwise we fall back silently.
"""

import os

BACKEND_ENV = "AFFINITY_CA_BACKEND"

_requested = os.environ.get(BACKEND_ENV, "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"{BACKEND_ENV} must be 'numba' or 'numpy', got {_requested!r}")

try:
    import numba as _nb

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _nb = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and _requested == "numba"
BACKEND = "numba" if USE_NUMBA else "numpy"


def njit(*args, **kwargs):
    """``numba.njit`` when numba is importable, identity decorator otherwise.

    Kernels decorated with this are always compiled if numba exists, so the
    numba and numpy paths can be benchmarked side by side in one process.
    """
    if HAVE_NUMBA:
        return _nb.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda fn: fn
