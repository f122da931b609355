"""Subset-lattice kernels with a compiled core and a numpy fallback.

The Cython extension is optional; when it failed to build (or when
CHERRYPICK_PURE_PYTHON=1 is set) the numpy implementation is used. Both
expose the same five functions and are cross-checked in the test suite.
"""

import os
from functools import lru_cache

from . import _numpy

if os.environ.get("CHERRYPICK_PURE_PYTHON") == "1":
    _impl = _numpy
else:
    try:
        from . import _core as _impl
    except ImportError:
        _impl = _numpy


@lru_cache(maxsize=8)
def popcounts(n):
    """Cached, read-only popcount table; the same n recurs constantly."""
    table = _impl.popcounts(n)
    table.setflags(write=False)
    return table


subset_sum = _impl.subset_sum
superset_and = _impl.superset_and
subset_max = _impl.subset_max
minimal_members = _impl.minimal_members
backend_name = _impl.backend_name

numpy_impl = _numpy
active_impl = _impl
