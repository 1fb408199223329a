"""Backend selection for the hot numeric kernels.

Every inner-loop primitive (AGM iterations, hypergeometric series, kernel
sweeps, the leapfrog stepper) exists twice: an elementwise implementation
compiled with numba, and a vectorised pure-numpy implementation.  The two
must agree to rounding; ``benchmarks/bench_backends.py`` compares their
speed.

Selection happens once at import time through the environment variable
``DSWAVE_BACKEND``:

* unset or ``numba``  -> numba-compiled kernels (falls back to numpy with a
  warning if numba is not importable);
* ``numpy``           -> pure-numpy kernels.
"""

import os
import warnings

_requested = os.environ.get("DSWAVE_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise RuntimeError(
        f"DSWAVE_BACKEND={_requested!r} not understood; use 'numba' or 'numpy'"
    )

if _requested == "numba":
    try:
        from . import _kernels_numba as kernels

        BACKEND = "numba"
    except ImportError:  # pragma: no cover - depends on environment
        warnings.warn("numba unavailable, using pure-numpy kernels")
        from . import _kernels_numpy as kernels

        BACKEND = "numpy"
else:
    from . import _kernels_numpy as kernels

    BACKEND = "numpy"
