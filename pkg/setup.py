"""Build script: compiles the optional Cython kernel extension.

The extension is a pure speed-up; if no compiler (or no Cython) is available
the build still succeeds and the package falls back to the numpy kernels at
import time (see acosonet.kernels).
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """build_ext that downgrades compilation failures to a warning."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # toolchain missing entirely
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            f"warning: building the acosonet._kernels_cy extension failed ({exc}); "
            "the numpy fallback kernels will be used",
            file=sys.stderr,
        )


def _extensions():
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError as exc:
        print(f"warning: Cython/numpy unavailable ({exc}); skipping extension build", file=sys.stderr)
        return []
    ext = Extension(
        "acosonet._kernels_cy",
        ["src/acosonet/_kernels_cy.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=_extensions(), cmdclass={"build_ext": OptionalBuildExt})
