"""Kernel backend selection.

The compiled extension is used when it was built; otherwise (or when
``HOMOCOVER_PURE_PYTHON`` is set to a non-empty value other than ``0``) the
numpy versions are used.  ``BACKEND`` names the active choice.
"""
import os

import numpy as np

from . import _kernels_py

_forced = os.environ.get("HOMOCOVER_PURE_PYTHON", "") not in ("", "0")
_compiled = None
if not _forced:
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"
_impl = _compiled if _compiled is not None else _kernels_py


def _c(a):
    return np.ascontiguousarray(a, dtype=float)


def classify_cell(V, N, H, tol):
    return _impl.classify_cell(_c(V), _c(N), _c(H), float(tol))


def nearest_homothet(P, N, b, C):
    return _impl.nearest_homothet(_c(P), _c(N), _c(b), _c(C))


def min_violation(P, N, H):
    return _impl.min_violation(_c(P), _c(N), _c(H))
