"""Build script.

The package is pure Python.  If Cython is available, an accelerated
enumeration kernel is compiled as well; when the extension is missing at
runtime the package transparently falls back to the pure implementation,
so a failed extension build is never fatal.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("LATTICEFLOW_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "latticeflow._enum_cy",
                    ["src/latticeflow/_enum_cy.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except Exception:
        ext_modules = []

setup(ext_modules=ext_modules)
