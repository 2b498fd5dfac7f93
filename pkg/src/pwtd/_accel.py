"""Backend switch for the bitmask kernels.

Set ``PWTD_DISABLE_NUMBA=1`` to force the pure-numpy path.  The flag is read
once at import; tests and the benchmark pass ``backend=`` explicitly instead.
"""

from __future__ import annotations

import os

DISABLE_ENV = "PWTD_DISABLE_NUMBA"

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and os.environ.get(DISABLE_ENV, "").strip().lower() not in {"1", "true", "yes", "on"}


def njit(fn):
    """``numba.njit(cache=True)`` when numba imports, identity otherwise."""
    if not HAVE_NUMBA:
        return fn
    return numba.njit(cache=True)(fn)


def resolve_backend(backend: str | None) -> str:
    if backend is None:
        return "numba" if USE_NUMBA else "numpy"
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not importable")
    return backend
