"""Numba availability switch.

Set ``RELFUZZ_DISABLE_NUMBA=1`` to force the pure-numpy kernels. The flag is
read once at import time.
"""

import os

_FALSY = {"", "0", "false", "no", "off"}


def _env_disabled() -> bool:
    return os.environ.get("RELFUZZ_DISABLE_NUMBA", "0").strip().lower() not in _FALSY


try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _env_disabled()


def jit(func):
    """Compile ``func`` in nopython/nogil mode, or return ``None`` if numba is off."""
    if not HAVE_NUMBA:
        return None
    return numba.njit(nogil=True, cache=True)(func)


def worker_count(requested=None) -> int:
    """Worker threads to use, capped by ``RELFUZZ_THREADS`` when set."""
    cap = os.environ.get("RELFUZZ_THREADS")
    n = requested if requested is not None else (os.cpu_count() or 1)
    if cap:
        try:
            n = min(n, int(cap))
        except ValueError:
            raise ValueError(f"RELFUZZ_THREADS must be an integer, got {cap!r}") from None
    return max(1, int(n))
