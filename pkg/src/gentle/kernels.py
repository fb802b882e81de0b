"""Select the compiled token kernels when available, else the Python twins.

Set ``GENTLE_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

IMPLEMENTATION = "python"

if not os.environ.get("GENTLE_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl

        IMPLEMENTATION = "cython"
    except ImportError:
        _impl = _pykernels
else:
    _impl = _pykernels

canonical_code = _impl.canonical_code
traversal_order = _impl.traversal_order
phi_pairs = _impl.phi_pairs

__all__ = ["IMPLEMENTATION", "canonical_code", "phi_pairs", "traversal_order"]
