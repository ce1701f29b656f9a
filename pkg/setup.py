"""Build script: compiles the optional LCS kernel extension.

The package works without the extension (a pure-Python fallback is selected
at import time), so any compiler failure downgrades to a warning instead of
aborting the install. Set PDTSYNTH_PURE=1 to skip compilation entirely.
"""

import os
import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            warnings.warn(f"skipping compiled LCS kernel ({exc}); pure-Python fallback will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"skipping {ext.name} ({exc}); pure-Python fallback will be used")


ext_modules = []
if os.environ.get("PDTSYNTH_PURE") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "pdtsynth._kernels._lcs_cy",
                    ["src/pdtsynth/_kernels/_lcs_cy.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "initializedcheck": False,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
