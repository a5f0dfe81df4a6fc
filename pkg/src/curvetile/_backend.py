"""Kernel backend selection.

The JIT backend is the default; set ``CURVETILE_BACKEND=numpy`` to force
the pure-numpy fallback (same results, slower).  ``CURVETILE_WORKERS``
bounds the JIT backend's thread count.
"""

from __future__ import annotations

import os

BACKEND_ENV = "CURVETILE_BACKEND"
WORKERS_ENV = "CURVETILE_WORKERS"


def _choose() -> str:
    pref = os.environ.get(BACKEND_ENV, "").strip().lower()
    if pref == "numpy":
        return "numpy"
    if pref and pref != "numba":
        raise ValueError(f"{BACKEND_ENV} must be 'numba' or 'numpy', got {pref!r}")
    try:
        import numba  # noqa: F401
    except ImportError:
        return "numpy"
    return "numba"


ACTIVE = _choose()

if ACTIVE == "numba":
    # Prefer OpenMP; the bundled TBB is too old and probing it warns.
    os.environ.setdefault("NUMBA_THREADING_LAYER_PRIORITY", "omp tbb workqueue")
    import warnings as _warnings

    _warnings.filterwarnings(
        "ignore", message=".*TBB threading layer.*", category=Warning
    )
    from ._kernels_numba import (  # noqa: F401
        directed_max_min_dist,
        label_brute,
        label_tiled,
        walk_chains,
    )
else:
    from ._kernels_numpy import (  # noqa: F401
        directed_max_min_dist,
        label_brute,
        label_tiled,
        walk_chains,
    )


def active_backend() -> str:
    return ACTIVE


def set_workers(n: int | None) -> int:
    """Bound kernel parallelism; returns the effective worker count.

    No-op on the numpy backend (it is single-threaded already).  Results
    are identical for any worker count; this only affects speed.
    """
    if ACTIVE != "numba":
        return 1
    import numba

    limit = numba.config.NUMBA_NUM_THREADS
    if n is None:
        env = os.environ.get(WORKERS_ENV, "").strip()
        n = int(env) if env else limit
    n = max(1, min(int(n), limit))
    numba.set_num_threads(n)
    return n


def warmup() -> None:
    """Trigger JIT compilation on a tiny input so first requests are fast."""
    import numpy as np

    segs = np.array([[0.0, 0.0, 1.0, 0.0], [0.0, 1.0, 1.0, 1.0]])
    inst = np.array([0, 1], dtype=np.int32)
    label_brute(0.0, 0.0, 0.125, 8, 8, segs, inst)
    label_tiled(0.0, 0.0, 0.125, 8, 8, segs, inst)
    walk_chains(np.array([-1, -1], dtype=np.int64))
    directed_max_min_dist(np.array([[0.5, 0.5]]), segs)
