"""Geometry backend selection.

Prefers the compiled extension and falls back to the pure-Python kernel
when the extension is absent (or when ``EXPLORESIM_PURE`` is set in the
environment, handy for benchmarking and debugging).  Both kernels are
bit-identical; ``BACKEND`` reports which one loaded.
"""

import os

if os.environ.get("EXPLORESIM_PURE"):
    from ._geompure import GeomCore
    BACKEND = "pure"
else:
    try:
        from ._geomcore import GeomCore  # type: ignore[no-redef]
        BACKEND = "compiled"
    except ImportError:
        from ._geompure import GeomCore  # type: ignore[no-redef]
        BACKEND = "pure"

__all__ = ["GeomCore", "BACKEND"]
