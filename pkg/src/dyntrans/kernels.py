"""Backend selection for the RK4 kernels.

The compiled extension is used when it imports; otherwise the numpy
implementation.  Set ``DYNTRANS_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("DYNTRANS_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "cython" if _impl is not _kernels_py else "python"

RUNNING = _kernels_py.RUNNING
CONVERGED = _kernels_py.CONVERGED
ESCAPED = _kernels_py.ESCAPED
NONFINITE = _kernels_py.NONFINITE

rk4_trajectory = _impl.rk4_trajectory
rk4_batch = _impl.rk4_batch
