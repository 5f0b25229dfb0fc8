"""Kernel backend selection.

The hot inner loops (polyline intersection filtering, winding accumulation,
Poisson quadrature, polynomial grid evaluation) exist twice: a compiled
Cython core (`_core`, built by setup.py when Cython is available) and a pure
numpy fallback (`_fallback`).  The compiled core is preferred at import time;
set INTERPEN_PURE_PYTHON=1 to force the fallback.  Both backends implement
the same contract and are compared by the parity tests and the benchmark in
benchmarks/bench_kernels.py.
"""

import os

from . import _fallback

if os.environ.get("INTERPEN_PURE_PYTHON"):
    impl = _fallback
else:
    try:
        from . import _core as impl  # type: ignore[no-redef]
    except ImportError:
        impl = _fallback

BACKEND = impl.BACKEND_NAME


def available_backends():
    """Names of importable backends (always includes the fallback)."""
    names = [_fallback.BACKEND_NAME]
    try:
        from . import _core

        names.append(_core.BACKEND_NAME)
    except ImportError:
        pass
    return names
