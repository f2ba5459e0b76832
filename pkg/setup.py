"""Build the optional Cython kernels.

The package imports and runs without them; ``dchaos.kernels`` falls back to
the NumPy implementation when the extension is missing.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("DCHAOS_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "dchaos._kernels",
                    ["src/dchaos/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    # no -ffast-math: summation order must match the fallback bit for bit
                    extra_compile_args=["-O2"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
