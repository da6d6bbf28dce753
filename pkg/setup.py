"""Build script: compiles the budget-DP kernel extension when Cython is available.

The package stays fully functional without the extension (a pure-Python twin
of the kernel is selected at import time), so any build failure here is
demoted to a warning rather than aborting the install.
"""

from __future__ import annotations

import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext_modules = cythonize(
        [
            Extension(
                "rsplib._dpcore",
                sources=["src/rsplib/_dpcore.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - exercised only on broken toolchains
    print(f"warning: building without compiled kernel ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
