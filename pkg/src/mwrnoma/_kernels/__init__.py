"""Kernel selection: compiled extension when available, numpy fallback otherwise.

Set MWRNOMA_BACKEND=python to force the fallback, or =cython to require
the compiled kernel (import fails if it was not built).
"""

import os

from . import _pyfallback

_requested = os.environ.get("MWRNOMA_BACKEND", "auto").lower()
if _requested not in ("auto", "cython", "python"):
    raise ImportError(f"MWRNOMA_BACKEND must be auto, cython or python, got {_requested!r}")

if _requested == "python":
    _impl = _pyfallback
    _backend = "python"
else:
    try:
        from . import _pair_rates as _impl  # type: ignore[no-redef]

        _backend = "cython"
    except ImportError:
        if _requested == "cython":
            raise
        _impl = _pyfallback
        _backend = "python"

pair_rate_chunk = _impl.pair_rate_chunk


def backend_name() -> str:
    """Which kernel implementation is active: 'cython' or 'python'."""
    return _backend
