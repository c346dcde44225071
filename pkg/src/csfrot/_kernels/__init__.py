"""Backend selection for the hot flow kernels.

numba is used when importable unless ``CSFROT_DISABLE_NUMBA`` is set to a
truthy value (``1``, ``true``, ``yes``), in which case the vectorized numpy
kernels run instead.  The choice is made once, at import time.
"""

import importlib
import os

from . import numpy_impl

_FLAG = os.environ.get("CSFROT_DISABLE_NUMBA", "").strip().lower()

numba_impl = None
if _FLAG not in ("1", "true", "yes", "on"):
    try:
        numba_impl = importlib.import_module(".numba_impl", __name__)
    except ImportError:  # numba missing
        numba_impl = None

backend = numba_impl if numba_impl is not None else numpy_impl
BACKEND_NAME = "numba" if numba_impl is not None else "numpy"

__all__ = ["backend", "numpy_impl", "numba_impl", "BACKEND_NAME"]
