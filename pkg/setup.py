"""Build hook for the optional compiled kernel.

The package is pure Python plus one Cython extension for the event-counting
hot loop.  When Cython (or a C compiler) is unavailable the extension is
skipped and the numpy fallback in hyperon_ch._kernels is used instead.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "hyperon_ch._kernels._core",
                ["src/hyperon_ch/_kernels/_core.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
