import os

import numpy as np
from setuptools import setup

ext_modules = []
if not os.environ.get("STRICHARTZ_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext = Extension(
            "strichartz._kernels",
            ["src/strichartz/_kernels.pyx"],
            include_dirs=[np.get_include()],
            extra_compile_args=["-O3"],
        )
        ext_modules = cythonize([ext], compiler_directives={"language_level": "3"})
    except ImportError:
        # no Cython: the numpy fallback in _kernels_py is used at runtime
        ext_modules = []

setup(ext_modules=ext_modules)
