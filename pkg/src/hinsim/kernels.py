"""Kernel selection: compiled extension when available, pure Python otherwise.

Set HINSIM_PURE=1 to force the pure-Python path (used by tests and the
benchmark to exercise both implementations).
"""

from __future__ import annotations

import os

if os.environ.get("HINSIM_PURE") == "1":
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

expand_product = _impl.expand_product
IMPLEMENTATION: str = _impl.IMPLEMENTATION


def implementations():
    """All available kernel implementations, compiled first."""
    from . import _kernels_py
    impls = []
    try:
        from . import _kernels  # type: ignore[attr-defined]
        impls.append(_kernels)
    except ImportError:
        pass
    impls.append(_kernels_py)
    return impls
