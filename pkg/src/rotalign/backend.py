"""Batch kernel selection.

The compiled extension is used when it imports; otherwise the pure-Python
implementation.  Set ``ROTALIGN_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels as python_kernels
from .cayley import NewtonStatus

try:
    from . import _kernels as compiled_kernels
except ImportError:  # extension not built
    compiled_kernels = None

STATUS_NAMES = {0: NewtonStatus.CONVERGED, 1: NewtonStatus.JACOBIAN_SINGULAR,
                2: NewtonStatus.ITERATION_LIMIT, 3: NewtonStatus.DIVERGED, -1: None}

if compiled_kernels is not None and not os.environ.get("ROTALIGN_PURE_PYTHON"):
    kernels, BACKEND = compiled_kernels, "compiled"
else:
    kernels, BACKEND = python_kernels, "python"


def get(name="auto"):
    """Kernel module by name: ``auto``, ``compiled`` or ``python``."""
    if name == "auto":
        return kernels
    if name == "python":
        return python_kernels
    if name == "compiled":
        if compiled_kernels is None:
            raise RuntimeError("compiled kernels are not available; reinstall with Cython and a C compiler")
        return compiled_kernels
    raise ValueError(f"unknown backend {name!r}")


def solve_batch(ms, **kw):
    return kernels.solve_batch(ms, **kw)


def spectral_batch(a_arr, tol=1e-9):
    return kernels.spectral_batch(a_arr, tol)
