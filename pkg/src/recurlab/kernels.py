"""Backend selection for the scanning kernels.

The compiled module is used when it imports; setting ``RECURLAB_PURE=1``
forces the numpy fallback.  ``BACKEND`` names the active implementation.
"""
import os

from recurlab import _kernels_py

if os.environ.get("RECURLAB_PURE"):
    _impl = _kernels_py
else:
    try:
        from recurlab import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "cython"

diag_power_scan = _impl.diag_power_scan
orbit_residuals = _impl.orbit_residuals
lft_iterate_distances = _impl.lft_iterate_distances
orbit_sup_residuals = _impl.orbit_sup_residuals


def available_backends():
    """Return ``{name: module}`` for every importable backend."""
    out = {"python": _kernels_py}
    try:
        from recurlab import _ckernels
    except ImportError:
        pass
    else:
        out["cython"] = _ckernels
    return out
