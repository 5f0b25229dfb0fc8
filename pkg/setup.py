"""Build script: compiles the optional kernel extension when Cython is available.

The package is fully functional without the extension (a numpy fallback is
selected at import time); `python setup.py build_ext --inplace` builds the
fast path.  -ffp-contract=off keeps the compiled kernels bit-compatible with
the fallback's accumulation order.
"""

import os

import numpy as np
from setuptools import Extension, setup

PYX = "src/interpen/_kernels/_core.pyx"

try:
    if not os.path.exists(PYX):
        raise ImportError
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "interpen._kernels._core",
                [PYX],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O2", "-ffp-contract=off"],
            )
        ],
        language_level=3,
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
