"""Kernel backend selection.

The compiled Cython extension is preferred when it imported cleanly; the
numpy implementation is the fallback. Set ACOSONET_BACKEND=python or
=cython to force a choice (forcing cython raises if the extension is
missing). Both backends implement the same contract; floating-point results
can differ by rounding only (different but fixed summation orders).
"""

from __future__ import annotations

import os

_requested = os.environ.get("ACOSONET_BACKEND")
if _requested not in (None, "", "python", "cython"):
    raise ImportError(f"ACOSONET_BACKEND must be 'python' or 'cython', got {_requested!r}")

_impl = None
if _requested != "python":
    try:
        from . import _kernels_cy as _impl
    except ImportError:
        if _requested == "cython":
            raise
        _impl = None

if _impl is not None:
    BACKEND = "cython"
else:
    from . import _kernels_py as _impl

    BACKEND = "python"

conv_pool_forward = _impl.conv_pool_forward
conv_pool_backward = _impl.conv_pool_backward
