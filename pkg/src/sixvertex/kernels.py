"""Select the compiled enumeration kernel when built, else the pure-Python one.

Set ``SIXVERTEX_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _enum_py

if os.environ.get("SIXVERTEX_PURE_PYTHON"):
    _impl = _enum_py
else:
    try:
        from . import _enum as _impl
    except ImportError:
        _impl = _enum_py

BACKEND = "cython" if _impl is not _enum_py else "python"
MAX_N = _enum_py.MAX_N
A1, A2, B1, B2, C1, C2 = range(6)

count_configs = _impl.count_configs
enumerate_types = _impl.enumerate_types
