"""Backend selection for the hot kernels.

numba is used when importable unless ``SHAPESECTION_NUMBA`` is set to
``0``/``false``/``off`` before import; the pure-numpy path is then used.
Both backends are always importable by name for testing and benchmarks.
"""

import os

from . import _kernels_numpy as numpy_backend

_flag = os.environ.get("SHAPESECTION_NUMBA", "1").strip().lower()

numba_backend = None
if _flag not in ("0", "false", "off", "no"):
    try:
        from . import _kernels_numba as numba_backend
    except ImportError:  # pragma: no cover - numba missing
        numba_backend = None

backend = numba_backend if numba_backend is not None else numpy_backend
BACKEND_NAME = "numba" if backend is numba_backend else "numpy"

DIR_ROW = numpy_backend.DIR_ROW
DIR_COL = numpy_backend.DIR_COL
DIR_INDEX = numpy_backend.DIR_INDEX
