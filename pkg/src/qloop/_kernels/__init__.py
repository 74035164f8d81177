"""Hot kernels, compiled when available.

At import time the Cython extension ``_ckernels`` is used if it was built;
otherwise the pure-Python module ``_fallback`` is used.  Setting the
environment variable ``QLOOP_PURE_PYTHON=1`` forces the fallback.
"""
import os
from types import ModuleType

from . import _fallback

KERNEL_NAMES = (
    "series_partial_sum",
    "rotation_loop_phase",
    "resonator_fields_array",
    "jordan_matrix",
)

try:
    from . import _ckernels
except ImportError:
    _ckernels = None


def available_backends() -> dict[str, ModuleType]:
    backends = {"python": _fallback}
    if _ckernels is not None:
        backends["cython"] = _ckernels
    return backends


def _select():
    if os.environ.get("QLOOP_PURE_PYTHON", "").strip() not in ("", "0") or _ckernels is None:
        return "python", _fallback
    return "cython", _ckernels


BACKEND, _impl = _select()

series_partial_sum = _impl.series_partial_sum
rotation_loop_phase = _impl.rotation_loop_phase
resonator_fields_array = _impl.resonator_fields_array
jordan_matrix = _impl.jordan_matrix

__all__ = ["BACKEND", "KERNEL_NAMES", "available_backends", *KERNEL_NAMES]
