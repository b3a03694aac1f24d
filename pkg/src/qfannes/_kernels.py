"""Kernel selection: the compiled Jacobi solver if it imports, else pure Python.

Set ``QFANNES_PURE_PYTHON=1`` to force the fallback.
"""

import os

from ._jacobi_py import jacobi_eigh as python_jacobi_eigh

try:
    from ._jacobi import jacobi_eigh as compiled_jacobi_eigh
except ImportError:  # extension not built
    compiled_jacobi_eigh = None

if compiled_jacobi_eigh is not None and not os.environ.get("QFANNES_PURE_PYTHON"):
    jacobi_eigh = compiled_jacobi_eigh
    BACKEND = "cython"
else:
    jacobi_eigh = python_jacobi_eigh
    BACKEND = "python"
