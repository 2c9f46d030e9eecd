"""Builds the optional compiled kernel extension.

The package works without it (pure-numpy kernels are selected at import
time when the extension is missing), so failures here only cost speed.
"""

from setuptools import setup
from Cython.Build import cythonize

setup(
    ext_modules=cythonize(
        ["src/refgame/autodiff/kernels/_ckernels.pyx"],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    ),
)
