"""Backend selection for the numeric kernels.

The compiled extension ``twistlap._kernels`` is used when it is importable;
otherwise, or when ``TWISTLAP_PURE_PYTHON=1`` is set, the pure-Python module
``twistlap._kernels_py`` is used.  ``BACKEND`` names the active choice.
"""
import os

from . import _kernels_py

_impl = _kernels_py
BACKEND = "python"
if os.environ.get("TWISTLAP_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py

gaussian_moment_1d = _impl.gaussian_moment_1d
moment_table = _impl.moment_table
pair_moment_sum = _impl.pair_moment_sum
hyp1f1_series = _impl.hyp1f1_series


def backends():
    """Mapping of every importable backend name to its module."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels
        out["cython"] = _kernels
    except ImportError:
        pass
    return out
