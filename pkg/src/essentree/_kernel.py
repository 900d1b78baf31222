"""Selects the sweep implementation at import time."""
try:
    from ._ckernel import sweep
    BACKEND = "cython"
except ImportError:  # pragma: no cover - depends on the build
    from ._pykernel import sweep
    BACKEND = "python"

__all__ = ["sweep", "BACKEND"]
