"""Exact simulation and ZX-guided compilation of dual-rail linear-optical entangling devices."""

import os

__version__ = "0.1.0"
FORMAT = "fockforge/1"

# FOCKFORGE_THREADS caps the BLAS pools; it must be set before numpy loads
_threads = os.environ.get("FOCKFORGE_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(_var, _threads)
