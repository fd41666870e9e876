"""Hot loop kernels with a selectable backend.

The backend is chosen once at import time from ``HEATSSE_BACKEND``:
``numba`` (default when numba imports) or ``numpy``. Both backends expose
the same functions; :func:`get_backend` returns either module explicitly,
which is how the parity tests and the benchmark compare them.
"""
import importlib
import os

from . import _numpy

BACKENDS = ("numba", "numpy")


def _numba_available():
    try:
        importlib.import_module("numba")
    except ImportError:
        return False
    return True


def get_backend(name):
    if name == "numpy":
        return _numpy
    if name == "numba":
        from . import _numba
        return _numba
    raise ValueError(f"unknown backend {name!r}; expected one of {BACKENDS}")


def _select():
    requested = os.environ.get("HEATSSE_BACKEND", "").strip().lower()
    if requested == "numpy":
        return "numpy"
    if requested not in ("", "numba"):
        raise ValueError(f"HEATSSE_BACKEND={requested!r}; expected one of {BACKENDS}")
    if _numba_available():
        return "numba"
    if requested == "numba":
        raise ImportError("HEATSSE_BACKEND=numba but numba is not importable")
    return "numpy"


BACKEND = _select()
_impl = get_backend(BACKEND)

stay_walks = _impl.stay_walks
gth_stationary = _impl.gth_stationary
subset_conductances = _impl.subset_conductances
prefix_cuts = _impl.prefix_cuts
l1_norms = _impl.l1_norms

__all__ = [
    "BACKEND",
    "BACKENDS",
    "get_backend",
    "stay_walks",
    "gth_stationary",
    "subset_conductances",
    "prefix_cuts",
    "l1_norms",
]
