"""Kernel selection: compiled extension when importable, else pure Python.

Set ``DICHOTOMY_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"

if os.environ.get("DICHOTOMY_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
else:
    _impl = _pykernels

haagerup_batch = _impl.haagerup_batch
rasterize = _impl.rasterize
label4 = _impl.label4

__all__ = ["BACKEND", "haagerup_batch", "rasterize", "label4"]
