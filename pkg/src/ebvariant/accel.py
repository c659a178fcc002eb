"""Backend selection for the hot scoring kernels.

Two interchangeable lanes exist for the batch local-fdr computation: a
numba ``@njit(parallel=True)`` kernel and a chunked pure-numpy twin.
The default is picked at import time from the ``EBVARIANT_BACKEND``
environment variable (``auto`` | ``numba`` | ``numpy``); ``auto`` uses
numba when it is importable and JIT is not disabled via
``NUMBA_DISABLE_JIT``. Thread count only affects speed, never output
bytes: the kernel writes each site's result independently.
"""

from __future__ import annotations

import os

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

_VALID = ("auto", "numba", "numpy")


def _resolve(choice: str) -> str:
    if choice not in _VALID:
        raise ValueError(
            f"EBVARIANT_BACKEND must be one of {_VALID}, got {choice!r}"
        )
    if choice == "numba" and not HAVE_NUMBA:
        raise RuntimeError("EBVARIANT_BACKEND=numba but numba is not importable")
    if choice == "auto":
        jit_disabled = os.environ.get("NUMBA_DISABLE_JIT", "0") not in ("", "0")
        return "numba" if (HAVE_NUMBA and not jit_disabled) else "numpy"
    return choice


_active = _resolve(os.environ.get("EBVARIANT_BACKEND", "auto").strip().lower())


def active_backend() -> str:
    """Name of the lane used when no per-call override is given."""
    return _active


def set_backend(name: str) -> None:
    """Override the default lane (mainly for tests and benchmarks)."""
    global _active
    _active = _resolve(name)


def resolve_backend(backend: str | None) -> str:
    if backend is None:
        return _active
    return _resolve(backend)


def set_threads(n: int | None) -> None:
    """Set the numba thread count. No-op on the numpy lane or when n is None."""
    if n is None:
        return
    if n < 1:
        raise ValueError(f"thread count must be >= 1, got {n}")
    if HAVE_NUMBA:
        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))


def threads_from_env() -> int | None:
    """Fallback thread count from EBVARIANT_THREADS, if set."""
    raw = os.environ.get("EBVARIANT_THREADS")
    if raw is None or raw.strip() == "":
        return None
    return int(raw)
