"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a pure NumPy/Python fallback is
selected at import time), so any failure here degrades gracefully to a
pure-Python install.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "ifsgraph.kernels._core",
                ["src/ifsgraph/kernels/_core.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"ifsgraph: skipping Cython extension ({exc}); pure fallback will be used")

setup(ext_modules=ext_modules)
