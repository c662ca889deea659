import numpy as np
from setuptools import Extension, setup

# The compiled kernel is an optimization, not a requirement: gisk falls back
# to the pure-Python twin (gisk._kernels_py) when the extension is missing.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "gisk._kernels_cy",
                ["src/gisk/_kernels_cy.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
