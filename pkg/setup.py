"""Build script: compiles the optional Cython kernel when Cython is present.

The package works without the compiled extension (a pure-Python kernel with
identical semantics is bundled), so a failed extension build is not fatal to
an install from source — delete the ext_modules block below or install with
Cython absent to get the fallback.
"""

import sys

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "v2vgame._kernel",
                ["src/v2vgame/_kernel.pyx"],
                # -ffp-contract=off keeps floating point bit-identical with the
                # pure-Python kernel (no FMA contraction of a*b+c)
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    sys.stderr.write("Cython unavailable; skipping compiled kernel build\n")

setup(ext_modules=ext_modules)
