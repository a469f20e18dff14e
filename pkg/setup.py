"""Build script: compiles the optional Cython kernel.

The compiled extension is a speedup only; if Cython or a C compiler is
unavailable the package installs anyway and falls back to the pure-numpy
kernel at import time.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "mwrnoma._kernels._pair_rates",
                ["src/mwrnoma/_kernels/_pair_rates.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    print("warning: Cython not available, building without the compiled kernel", file=sys.stderr)

setup(ext_modules=ext_modules)
