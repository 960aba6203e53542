"""Build script: compiles the hot-loop kernels as a C extension when a
compiler is available, otherwise installs the pure-numpy fallback only
(selected automatically at import time by seqopt.backend)."""

import numpy as np
from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the extension if possible; fall back to pure Python on failure."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing or broken toolchain
            print(f"WARNING: skipping compiled kernels ({exc}); "
                  "seqopt will use the pure-Python backend")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"WARNING: failed to compile {ext.name} ({exc}); "
                  "seqopt will use the pure-Python backend")


def extensions():
    from Cython.Build import cythonize

    ext = Extension(
        "seqopt._kernels",
        ["src/seqopt/_kernels.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level=3)


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": OptionalBuildExt},
)
