"""Hot kernels with a compiled backend and a pure-Python fallback.

The Cython extension ``_ckernels`` is preferred when it imports; setting the
environment variable ``CATERPILLARS_PURE_PYTHON=1`` forces the fallback.
``BACKEND`` names the backend in use.
"""

import os

from . import _pykernels as python_backend

compiled_backend = None
if not os.environ.get("CATERPILLARS_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

_impl = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "cython" if compiled_backend is not None else "python"

gamma_from_code = _impl.gamma_from_code
gamma_histogram = _impl.gamma_histogram
contains_132 = _impl.contains_132
contains_231 = _impl.contains_231
rtilde_window = _impl.rtilde_window
rtilde_summary = _impl.rtilde_summary

__all__ = [
    "BACKEND",
    "compiled_backend",
    "python_backend",
    "gamma_from_code",
    "gamma_histogram",
    "contains_132",
    "contains_231",
    "rtilde_window",
    "rtilde_summary",
]
