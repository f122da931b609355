"""Build hook for the optional compiled lattice kernels.

The package is pure Python plus numpy; the Cython extension is a drop-in
accelerator for the subset-lattice transforms. If Cython or a C compiler is
missing the build silently falls back to the numpy implementation (the
extension is marked optional).
"""

import os

from setuptools import Extension, setup


def extensions():
    if os.environ.get("CHERRYPICK_SKIP_EXT") == "1":
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "cherrypick._lattice._core",
        ["src/cherrypick/_lattice/_core.pyx"],
        extra_compile_args=["-O3"],
        optional=True,
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions())
