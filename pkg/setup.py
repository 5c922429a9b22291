"""Build hook: compiles the optional Cython kernel core.

The package works without the extension (a numpy fallback is selected at
import time), so a failed Cython build degrades to a pure-Python install
instead of aborting.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext_modules = cythonize(
        [
            Extension(
                "qmanin._ckernels",
                ["src/qmanin/_ckernels.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    import sys

    print(f"qmanin: skipping Cython extension build ({exc!r}); "
          "falling back to the pure-Python kernels", file=sys.stderr)

setup(ext_modules=ext_modules)
