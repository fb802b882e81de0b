"""Build the optional Cython kernels; the package works without them."""

import os

from setuptools import Extension, setup


def _extensions():
    if os.environ.get("GENTLE_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "gentle._ckernels",
        ["src/gentle/_ckernels.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=_extensions())
