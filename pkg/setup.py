"""Build script for the optional compiled kernel core.

The package is fully functional without the extension (a pure-Python
backend is selected at import time), so the extension is marked optional:
a missing C toolchain degrades the install instead of failing it.

-ffp-contract=off keeps the C double arithmetic bit-identical to CPython's
(no fused multiply-add), which the cross-backend determinism tests rely on.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext = Extension(
        "he2c_sim.kernels._core",
        ["src/he2c_sim/kernels/_core.pyx"],
        extra_compile_args=["-O2", "-ffp-contract=off"],
        optional=True,
    )
    ext_modules = cythonize([ext], language_level="3")

setup(ext_modules=ext_modules)
