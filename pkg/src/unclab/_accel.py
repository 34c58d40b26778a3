"""Numba switch.

Kernels come in two flavours: loop kernels compiled with ``numba.njit`` and
vectorised numpy equivalents.  Numba is used when it imports cleanly and
``UNCLAB_DISABLE_NUMBA`` is unset (or ``0``/``false``).
"""
import os

_FALSEY = {"", "0", "false", "no", "off"}

try:
    import numba
    HAVE_NUMBA = True
except Exception:  # pragma: no cover - depends on the environment
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and (
    os.environ.get("UNCLAB_DISABLE_NUMBA", "").strip().lower() in _FALSEY
)


def njit(fn):
    """Compile ``fn`` with numba when available, else return it unchanged."""
    if not HAVE_NUMBA:
        return fn
    return numba.njit(cache=True, fastmath=False)(fn)
