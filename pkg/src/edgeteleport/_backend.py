"""Numba/numpy backend selection for the hot Monte Carlo kernels.

The trial loops in :mod:`edgeteleport._kernels` are compiled with numba when it
is importable.  Setting the environment variable ``EDGETELEPORT_DISABLE_NUMBA``
to a truthy value (``1``, ``true``, ``yes``) forces the pure-numpy path, which
runs the same protocol step by step through the library API.  Callers can also
pick a backend per call via the ``backend=`` argument of
:func:`edgeteleport.protocol.run_trials`.
"""

from __future__ import annotations

import os

_ENV_FLAG = "EDGETELEPORT_DISABLE_NUMBA"


def _env_disabled() -> bool:
    return os.environ.get(_ENV_FLAG, "").strip().lower() in ("1", "true", "yes", "on")


try:
    from numba import njit as _njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised only without numba
    NUMBA_AVAILABLE = False

    def _njit(*args, **kwargs):
        def deco(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return deco


def maybe_njit(*args, **kwargs):
    """``numba.njit`` when available, identity decorator otherwise."""
    return _njit(*args, **kwargs)


def default_backend() -> str:
    """Backend used when the caller does not ask for one explicitly."""
    if NUMBA_AVAILABLE and not _env_disabled():
        return "numba"
    return "numpy"


def resolve_backend(backend: str | None) -> str:
    if backend is None:
        return default_backend()
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}; use 'numba' or 'numpy'")
    if backend == "numba" and not NUMBA_AVAILABLE:
        raise RuntimeError("numba backend requested but numba is not importable")
    return backend
