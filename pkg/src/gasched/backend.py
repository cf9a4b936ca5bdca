"""Kernel backend selection.

Two interchangeable implementations of ``evaluate_slice`` exist: a compiled
one (numba) and a pure-numpy one. They produce identical results; only speed
differs. The default is the compiled kernel when importable. Override with
environment variables before the first use:

    GASCHED_BACKEND=numpy|numba   pick explicitly
    GASCHED_NO_NUMBA=1            shorthand for numpy

Benchmarks can also request a backend per call via ``get(name)``.
"""

import os

from . import _kernels_numpy

_BACKENDS = {_kernels_numpy.NAME: _kernels_numpy}

try:
    from . import _kernels_numba
    _BACKENDS[_kernels_numba.NAME] = _kernels_numba
except ImportError:
    _kernels_numba = None


def available() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def _default_name() -> str:
    forced = os.environ.get("GASCHED_BACKEND")
    if forced:
        if forced not in _BACKENDS:
            raise ValueError(
                f"GASCHED_BACKEND={forced!r}: not one of {available()}"
            )
        return forced
    if os.environ.get("GASCHED_NO_NUMBA"):
        return "numpy"
    return "numba" if "numba" in _BACKENDS else "numpy"


def get(name=None):
    """Kernel module by name; None means the environment-selected default."""
    if name is None:
        name = _default_name()
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown backend {name!r}: not one of {available()}") from None


def active() -> str:
    return get().NAME
