"""Build script; compiles the optional mod-p elimination kernel.

The package works without the extension (a numpy fallback is selected at
import time), so any failure here is non-fatal: we simply ship pure Python.
Set TATEPROD_REQUIRE_EXT=1 to turn a failed extension build into an error.
"""

import os

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "tateprod._ffcore",
                ["src/tateprod/_ffcore.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - exercised only without cython
    if os.environ.get("TATEPROD_REQUIRE_EXT"):
        raise
    print(f"tateprod: building without compiled kernel ({exc})")

setup(ext_modules=ext_modules)
