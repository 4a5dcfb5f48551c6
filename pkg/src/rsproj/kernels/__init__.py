"""Hot-loop kernels with a compiled core and a numpy fallback.

The compiled extension is preferred when importable; set
``RSPROJ_PURE_PYTHON=1`` to force the fallback. Dense pairwise distances
are BLAS-backed numpy in both configurations (``pairwise_sqdists``).
"""

import os

import numpy as np

from . import _fallback

if os.environ.get("RSPROJ_PURE_PYTHON", "") == "1":
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _core as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"

retained_counts = _impl.retained_counts
subset_select_binary = _impl.subset_select_binary
expand_two_valued = _impl.expand_two_valued
# scipy's sparse Gram product beats the compiled two-pointer walk at
# every size measured (benchmarks/kernel_bench.py), so this one is not
# backend-switched; the _core variant exists for the comparison
pairwise_intersections = _fallback.pairwise_intersections


def pairwise_sqdists(x):
    """Condensed squared Euclidean distances over all row pairs i < j.

    Gram-trick with a clamp at zero; the tiny cancellation error this
    admits is far below every tolerance used downstream.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    sq = np.einsum("ij,ij->i", x, x)
    gram = x @ x.T
    d2 = sq[:, None] + sq[None, :] - 2.0 * gram
    iu = np.triu_indices(x.shape[0], k=1)
    return np.maximum(d2[iu], 0.0)


__all__ = [
    "BACKEND",
    "retained_counts",
    "pairwise_intersections",
    "subset_select_binary",
    "expand_two_valued",
    "pairwise_sqdists",
]
