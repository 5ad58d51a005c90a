"""Backend selection for the hot kernels.

The compiled ``_core`` extension is preferred; the numpy implementation in
``_pycore`` is used when the extension was not built or when the
environment variable ``SPATIALENT_PURE_PYTHON`` is set to a non-empty value
other than ``0``.
"""
import os

from . import _pycore

_force_python = os.environ.get("SPATIALENT_PURE_PYTHON", "") not in ("", "0")

if _force_python:
    _impl = _pycore
    BACKEND = "python"
else:
    try:
        from . import _core as _impl
        BACKEND = "compiled"
    except ImportError:
        _impl = _pycore
        BACKEND = "python"

eigenfunction_value = _impl.eigenfunction_value
eigenfunction_row = _impl.eigenfunction_row
eigenfunction_table = _impl.eigenfunction_table
chi_printed_direct = _impl.chi_printed_direct


def backends():
    """Mapping of available backend name -> kernel module."""
    out = {"python": _pycore}
    try:
        from . import _core
        out["compiled"] = _core
    except ImportError:
        pass
    return out
