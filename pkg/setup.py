"""Build hook: compiles the optional integer-polynomial kernel.

The extension is marked optional; if no C compiler is available the
package installs anyway and falls back to the pure-Python kernel.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "regcad._intpoly_c",
                ["src/regcad/_intpoly_c.pyx"],
                extra_compile_args=["-O2"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
