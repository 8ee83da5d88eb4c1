"""Select the match kernel at import time.

The compiled ``_core`` extension is preferred. Setting ``COOPGAME_PURE=1``
forces the pure-Python fallback, which is also used when the extension
was not built.
"""
import os

from . import _pycore

if os.environ.get("COOPGAME_PURE", "") not in ("", "0"):
    _impl = _pycore
    BACKEND = "python"
else:
    try:
        from . import _core as _impl
    except ImportError:
        _impl = _pycore
        BACKEND = "python"
    else:
        BACKEND = "cython"

play_generation = _impl.play_generation


def available_backends():
    """Map backend name to its ``play_generation``; used by tests and the benchmark."""
    found = {"python": _pycore.play_generation}
    try:
        from . import _core
    except ImportError:
        pass
    else:
        found["cython"] = _core.play_generation
    return found
