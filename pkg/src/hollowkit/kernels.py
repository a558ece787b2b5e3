"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``HOLLOWKIT_PURE_PYTHON=1`` to force the pure-Python path.
"""
from __future__ import annotations

import os

from . import _kernels_py

COMPILED = False
if os.environ.get("HOLLOWKIT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl

        COMPILED = True
    except ImportError:
        _impl = _kernels_py
else:
    _impl = _kernels_py

find_x1 = _impl.find_x1
zero11_angles = _impl.zero11_angles
zero11_batch = _impl.zero11_batch
grid_o2 = _impl.grid_o2
grid_o3 = _impl.grid_o3

BRANCH_NONE = _kernels_py.BRANCH_NONE
BRANCH_D33 = _kernels_py.BRANCH_D33
BRANCH_DD11 = _kernels_py.BRANCH_DD11
BRANCH_GENERAL = _kernels_py.BRANCH_GENERAL
