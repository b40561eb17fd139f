"""Kernel backend selection.

The compiled Cython kernels are used when importable; otherwise the numpy
fallback is used.  Setting ``ENERGYCLUST_BACKEND=python`` forces the
fallback even when the extension is present.
"""
import os

from . import _fallback

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = {"python": _fallback}
if _compiled is not None:
    BACKENDS["cython"] = _compiled

if os.environ.get("ENERGYCLUST_BACKEND", "").lower() == "python" or _compiled is None:
    BACKEND = "python"
else:
    BACKEND = "cython"

_impl = BACKENDS[BACKEND]
distance_sum = _impl.distance_sum
gaussian_kernel_sum = _impl.gaussian_kernel_sum


def get_backend(name):
    """Return the kernel module registered under ``name``."""
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} not available; have {sorted(BACKENDS)}") from None
