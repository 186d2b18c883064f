from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "oscnet._kernels._core",
                ["src/oscnet/_kernels/_core.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
else:
    # Pure-Python install: the package falls back to the numpy kernels.
    extensions = []

setup(ext_modules=extensions)
