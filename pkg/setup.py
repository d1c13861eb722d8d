"""Build script for the optional compiled kernel extension.

The package works without the extension (a numpy fallback is selected at
import time), so any failure to compile is non-fatal.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    import numpy as np

    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "skinforge.kernels._core",
                ["src/skinforge/kernels/_core.pyx"],
                include_dirs=[np.get_include()],
                # fp-contract off: kernel results must be bit-identical to
                # the numpy fallback, so FMA contraction is not allowed.
                extra_compile_args=["-O3", "-ffp-contract=off"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    sys.stderr.write(f"skinforge: building without compiled kernels ({exc})\n")

setup(ext_modules=ext_modules)
