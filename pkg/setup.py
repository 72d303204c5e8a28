"""Build the optional compiled commutator sweep.

If Cython or a C compiler is missing the package still installs and falls
back to the pure-Python sweep at import time.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("CHARGEHUNT_NO_EXT", "") != "1":
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "chargehunt._kernels",
                    ["src/chargehunt/_kernels.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
            quiet=True,
        )

setup(ext_modules=ext_modules)
