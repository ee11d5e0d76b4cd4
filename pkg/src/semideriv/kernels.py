"""Kernel selection: compiled ``_ckernels`` when built, else ``_pykernels``.

Set ``SEMIDERIV_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

if os.environ.get("SEMIDERIV_PURE_PYTHON") == "1":
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

matmul_maxmin = _impl.matmul_maxmin
matadd_maxmin = _impl.matadd_maxmin
matmul_sumprod = _impl.matmul_sumprod
matadd_sumprod = _impl.matadd_sumprod
matmul_maxplus = _impl.matmul_maxplus
matadd_maxplus = _impl.matadd_maxplus
matmul_generic = _impl.matmul_generic
matadd_generic = _impl.matadd_generic


def backends():
    """Both kernel modules keyed by name (the compiled one only if importable)."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
