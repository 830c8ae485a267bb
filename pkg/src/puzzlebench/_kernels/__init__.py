"""Hot-loop kernels with backend selection.

The numba backend is the default; set ``PUZZLEBENCH_NO_NUMBA=1`` to force
the pure-numpy fallback (also used automatically when numba is not
importable).  ``benchmarks/bench_kernels.py`` compares the two.
"""

from __future__ import annotations

import os

_flag = os.environ.get("PUZZLEBENCH_NO_NUMBA", "").strip().lower()
_force_numpy = _flag in {"1", "true", "yes", "on"}

if _force_numpy:
    from puzzlebench._kernels import numpy_impl as _impl

    BACKEND = "numpy"
else:
    try:
        from puzzlebench._kernels import numba_impl as _impl

        BACKEND = "numba"
    except ImportError:
        from puzzlebench._kernels import numpy_impl as _impl

        BACKEND = "numpy"

fill_circle = _impl.fill_circle
fill_ring = _impl.fill_ring
fill_capsule = _impl.fill_capsule
fill_polygon = _impl.fill_polygon
classify_image = _impl.classify_image
ca_step = _impl.ca_step
conv_valid_sep = _impl.conv_valid_sep

__all__ = [
    "BACKEND",
    "ca_step",
    "classify_image",
    "conv_valid_sep",
    "fill_capsule",
    "fill_circle",
    "fill_polygon",
    "fill_ring",
]
