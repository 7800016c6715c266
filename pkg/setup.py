import os

import numpy
from setuptools import Extension, setup

ext_modules = []
if os.environ.get("ZXBQC_NO_EXT") != "1":
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "zxbqc.runtime._kernel",
                ["src/zxbqc/runtime/_kernel.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
    )

setup(ext_modules=ext_modules)
