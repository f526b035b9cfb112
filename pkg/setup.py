"""Build script: compiles the optional fast kernel extension.

The package works without the extension (pure-Python kernels are selected at
import time); the build therefore tolerates a missing Cython toolchain.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "prony._kernels._fast",
                sources=["src/prony/_kernels/_fast.pyx"],
                # contraction off: the compiled lane must match the pure lane
                # bit-for-bit
                extra_compile_args=["-O2", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
