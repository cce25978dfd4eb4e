"""Build the optional compiled labelling kernel.

The package works without the extension (a pure-Python fallback is
selected at import time), so the build is marked optional: a missing
compiler degrades to the fallback instead of failing the install.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "argudas._kernel._grounded",
                ["src/argudas/_kernel/_grounded.pyx"],
                optional=True,
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
        },
    )

setup(ext_modules=ext_modules)
