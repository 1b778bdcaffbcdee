"""Build script.

The compiled kernels are optional: if Cython or a C compiler is missing,
or PERDEC_NO_EXT is set, the package installs in pure-Python form and
perdec.kernels falls back to the interpreted implementations.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Skip the extension instead of failing the whole install."""

    def run(self):
        try:
            build_ext.run(self)
        except Exception as exc:  # CCompilerError and friends
            print(f"warning: building perdec._kernels failed ({exc}); "
                  "falling back to pure Python")

    def build_extension(self, ext):
        try:
            build_ext.build_extension(self, ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); "
                  "falling back to pure Python")


def extensions():
    if os.environ.get("PERDEC_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("warning: Cython not available; installing pure Python only")
        return []
    return cythonize(
        [
            Extension(
                "perdec._kernels",
                ["src/perdec/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
