"""Backend selection for the compiled kernels.

Set ``BINARYTAILS_NUMBA=0`` to force the pure-numpy code paths. The flag is
read once at import time.
"""

from __future__ import annotations

import os

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    numba = None
    HAVE_NUMBA = False


def _flag_enabled(value: str) -> bool:
    return value.strip().lower() not in ("0", "false", "no", "off", "")


USE_NUMBA = HAVE_NUMBA and _flag_enabled(os.environ.get("BINARYTAILS_NUMBA", "1"))


def njit(fn):
    """Compile ``fn`` with numba when available, else return it unchanged."""
    if not HAVE_NUMBA:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


def worker_count() -> int:
    """Worker threads for sharded kernels (``BINARYTAILS_WORKERS``)."""
    raw = os.environ.get("BINARYTAILS_WORKERS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1
