"""Kernel backend selection: compiled extension when available, numpy twin otherwise.

Set LATDESIGN_FORCE_FALLBACK=1 to ignore the extension (used by the
equivalence tests and the benchmark).
"""

from __future__ import annotations

import os

if os.environ.get("LATDESIGN_FORCE_FALLBACK") == "1":
    from . import pyfallback as _impl

    HAVE_COMPILED = False
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        HAVE_COMPILED = True
    except ImportError:
        from . import pyfallback as _impl

        HAVE_COMPILED = False

BACKEND = "compiled" if HAVE_COMPILED else "fallback"

enumerate_candidates = _impl.enumerate_candidates
pair_histogram_block = _impl.pair_histogram_block
