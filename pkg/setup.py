"""Build script for the optional compiled recursion kernel.

The package is fully functional without the extension: sarsim.kernels falls
back to a numpy implementation at import time. The extension exists because
the time recursion cannot be vectorized across time and dominates generation
cost in pure Python.
"""

import sys

from setuptools import Extension, setup


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        print("Cython/numpy unavailable at build time; skipping compiled kernel",
              file=sys.stderr)
        return []
    ext = Extension(
        "sarsim._kernels",
        ["src/sarsim/_kernels.pyx"],
        include_dirs=[numpy.get_include()],
        # -ffp-contract=off forbids FMA contraction so the compiled kernel is
        # bit-identical to the numpy fallback and the scalar reference.
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions())
