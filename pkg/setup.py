"""Build script: compiles the optional survival kernel when Cython is present.

The package works without the extension; runchart._backend falls back to the
pure NumPy kernel at import time.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "runchart._kernel",
                ["src/runchart/_kernel.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
