"""Hot numerical kernels with a compiled core and a pure-Python fallback.

The Cython extension (`_speedups`) is built at install time when a compiler
is available; otherwise, or when PEG_PURE_PYTHON is set, the numpy-based
fallback (`_purepy`) is used.  Both expose the same three functions:

    first_crossing(pts, ia, ib)        -> index of first crossing pair or -1
    chord_walk(pts, r)                 -> (segment index, fraction) per vertex
    refine_collision(pts, cum, total, q0, two_n, step0, min_step, max_iter)
                                       -> (refined params, residual)

`benchmarks/bench_kernels.py` compares the two implementations.
"""

import os

if os.environ.get("PEG_PURE_PYTHON"):
    from . import _purepy as _impl

    BACKEND = "python"
else:
    try:
        from . import _speedups as _impl

        BACKEND = "cython"
    except ImportError:
        from . import _purepy as _impl

        BACKEND = "python"

first_crossing = _impl.first_crossing
chord_walk = _impl.chord_walk
refine_collision = _impl.refine_collision
embed_point = _impl.embed_point
