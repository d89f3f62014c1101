"""Builds the optional compiled kernel; the package falls back to pure Python without it."""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("wilfcollapse._ckernels", ["src/wilfcollapse/_ckernels.pyx"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
