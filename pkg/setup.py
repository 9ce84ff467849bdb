"""Build the optional Cython search core.

The package works without it: ``opk._core`` falls back to the pure-Python
implementation when the extension cannot be imported.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("OPK_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("opk._csearch", ["src/opk/_csearch.pyx"])],
            language_level=3,
            compiler_directives={"boundscheck": False, "wraparound": False},
        )

setup(ext_modules=ext_modules)
