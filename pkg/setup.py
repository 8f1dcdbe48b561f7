import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover - the pure-Python backend still works
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("HYPCLUST_NO_EXT"):
    ext_modules = cythonize(
        [
            Extension(
                "hypclust._core",
                ["src/hypclust/_core.pyx"],
                include_dirs=[np.get_include()],
                language="c++",
                extra_compile_args=["-O3", "-fno-fast-math", "-ffp-contract=off"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )

setup(ext_modules=ext_modules)
