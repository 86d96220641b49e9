"""Backend selection for the hot pairwise kernels.

The numba-jitted backend is used when available. Set
``EXPBANDIT_BACKEND=numpy`` to force the pure-numpy fallback, or
``EXPBANDIT_BACKEND=numba`` to fail loudly if numba cannot be imported.
Run ``benchmarks/bench_accel.py`` to compare the two.
"""

import os

_requested = os.environ.get("EXPBANDIT_BACKEND", "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise ValueError(
        f"EXPBANDIT_BACKEND must be 'numba' or 'numpy', got {_requested!r}"
    )

if _requested == "numpy":
    from expbandit.accel import _numpy_impl as _impl

    BACKEND = "numpy"
else:
    try:
        from expbandit.accel import _numba_impl as _impl

        BACKEND = "numba"
    except ImportError:
        if _requested == "numba":
            raise
        from expbandit.accel import _numpy_impl as _impl

        BACKEND = "numpy"

rbf_cross = _impl.rbf_cross
linear_cross = _impl.linear_cross
jaccard_cross = _impl.jaccard_cross
kendall_cross = _impl.kendall_cross
lcs_batch = _impl.lcs_batch

__all__ = [
    "BACKEND",
    "rbf_cross",
    "linear_cross",
    "jaccard_cross",
    "kendall_cross",
    "lcs_batch",
]
