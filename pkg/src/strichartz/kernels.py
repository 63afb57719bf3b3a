"""Backend selection for the Laguerre kernels.

The compiled extension is used when it imports; setting
STRICHARTZ_PURE_PYTHON=1 forces the numpy versions.
"""
import os

from . import _kernels_py

BACKEND = "python"
laguerre_table = _kernels_py.laguerre_table
laguerre_projections = _kernels_py.laguerre_projections

if not os.environ.get("STRICHARTZ_PURE_PYTHON"):
    try:
        from . import _kernels as _ext
    except ImportError:
        _ext = None
    if _ext is not None:
        BACKEND = "cython"
        laguerre_table = _ext.laguerre_table
        laguerre_projections = _ext.laguerre_projections
