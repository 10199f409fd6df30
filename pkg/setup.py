"""Build the optional compiled kernels.

The package is fully functional without the extension (a numpy fallback is
selected at import time), so the build is marked optional and a failed
compile only degrades performance.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "latdesign._kernels._core",
                ["src/latdesign/_kernels/_core.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
