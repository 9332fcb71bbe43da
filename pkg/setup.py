"""Build script for the optional compiled jet kernel.

The package is fully functional without the extension (a numpy fallback is
selected at import time), so compilation failures only cost speed.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, etc.
            print(f"warning: building the jet kernel failed ({exc}); "
                  "falling back to the pure-python backend", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: {ext.name} failed to build ({exc}); "
                  "falling back to the pure-python backend", file=sys.stderr)


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("warning: Cython not available; skipping the compiled jet kernel",
              file=sys.stderr)
        return []
    return cythonize(
        [Extension("biconserve.jets._jetcore",
                   ["src/biconserve/jets/_jetcore.pyx"],
                   extra_compile_args=["-O3"])],
        language_level=3,
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
