"""Kernel selection: compiled clipping extension with pure-Python fallback.

Set SHAPECURRENTS_PURE=1 to force the pure-Python implementation.
"""

from __future__ import annotations

import os

from . import _clip_py

if os.environ.get("SHAPECURRENTS_PURE") == "1":
    _impl = _clip_py
    BACKEND = "pure"
else:
    try:
        from . import _clip_fast as _impl
        BACKEND = "compiled"
    except ImportError:
        _impl = _clip_py
        BACKEND = "pure"

clip_grid_segments = _impl.clip_grid_segments
