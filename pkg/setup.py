import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("CIVEC_NO_EXT") != "1":
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "civec._ckernels",
                ["src/civec/_ckernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
