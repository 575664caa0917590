"""Backend selection for the per-point well lattice sums.

The compiled extension is used when it was built; otherwise, or when the
environment variable ``CSQ_PURE_PYTHON`` is set to a non-empty value, the
numpy implementation is loaded instead.
"""
import os

from . import _slow

slow = _slow
fast = None

if not os.environ.get("CSQ_PURE_PYTHON"):
    try:
        from . import _fast as fast
    except ImportError:
        fast = None

backend = fast if fast is not None else slow
BACKEND = "cython" if backend is fast else "numpy"

well_sums = backend.well_sums
well_pair_sums = backend.well_pair_sums
pair_tables = backend.pair_tables

__all__ = ["BACKEND", "fast", "slow", "well_sums", "well_pair_sums", "pair_tables"]
