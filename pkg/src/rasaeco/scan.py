"""Selects the tag-scanner implementation at import time.

The compiled extension is preferred when it is built; the pure-Python scanner
is the fallback.  Set ``RASAECO_NO_EXT=1`` to force the pure scanner (used by
the benchmark and when debugging the extension).
"""

from __future__ import annotations

import os

from rasaeco._scan_py import CLOSE, KINDS, MALFORMED, OPEN, VOID

if os.environ.get("RASAECO_NO_EXT"):
    from rasaeco._scan_py import scan_tags

    IMPLEMENTATION = "python"
else:
    try:
        from rasaeco._scan_c import scan_tags  # type: ignore[no-redef]

        IMPLEMENTATION = "c"
    except ImportError:
        from rasaeco._scan_py import scan_tags  # type: ignore[no-redef]

        IMPLEMENTATION = "python"

__all__ = ["CLOSE", "KINDS", "MALFORMED", "OPEN", "VOID", "IMPLEMENTATION", "scan_tags"]
