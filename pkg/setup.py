"""Build hook for the optional compiled kernels.

The package works without the extension (a pure-Python fallback is
selected at import); building it just makes decoding and EM training much
faster.  If Cython or a C compiler is unavailable the build degrades to
pure Python with a warning.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "morphtag._speedups",
                ["src/morphtag/_speedups.pyx"],
                include_dirs=[np.get_include()],
                # plain -O2, no fast-math/FMA: results must be bit-identical
                # to the pure-Python kernels
                extra_compile_args=["-O2"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError as exc:
    print(f"warning: building without compiled kernels ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
