"""Builds the optional Cython matching kernel; the package works without it."""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("MATCHMARKET_NO_EXT", "") in ("", "0"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("matchmarket._cmatch", ["src/matchmarket/_cmatch.pyx"])],
            compiler_directives={"language_level": 3},
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
