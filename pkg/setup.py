"""Build script: compiles the optional C kernel extension.

The package works without the extension (a numpy fallback is selected at
import time), so a failed compile downgrades to a pure build instead of
aborting the install.  Set CCX_PURE_PYTHON=1 to skip the compile entirely.
"""

import os

from setuptools import setup
from setuptools.command.build_ext import build_ext


def make_extensions():
    if os.environ.get("CCX_PURE_PYTHON"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    from setuptools import Extension

    ext = Extension(
        "ccx._ckernel",
        ["src/ccx/_ckernel.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


class optional_build_ext(build_ext):
    """Degrade to a pure-python install when the toolchain is missing."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - toolchain dependent
            print(f"ccx: C kernel build skipped ({exc}); using numpy fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - toolchain dependent
            print(f"ccx: C kernel build skipped ({exc}); using numpy fallback")


setup(ext_modules=make_extensions(), cmdclass={"build_ext": optional_build_ext})
