"""Backend selection for the agglomeration kernels.

The compiled Cython module is used when importable; otherwise, or when
``WARDCLUST_PURE=1`` is set, the numpy implementation is used.
"""
import os

from . import _pykernels

try:
    if os.environ.get("WARDCLUST_PURE"):
        raise ImportError("pure backend requested")
    from . import _ckernels
except ImportError:
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["compiled"] = _ckernels

DEFAULT_BACKEND = "compiled" if _ckernels is not None else "python"


def get(backend=None):
    name = backend or DEFAULT_BACKEND
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}") from None
