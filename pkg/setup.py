import numpy
from Cython.Build import cythonize
from setuptools import Extension, setup

# The compiled kernels are optional at runtime (cyclab._kernels falls back to
# the pure-Python implementations) but we always try to build them.
extensions = [
    Extension(
        "cyclab._speedups",
        ["src/cyclab/_speedups.pyx"],
        include_dirs=[numpy.get_include()],
    )
]

setup(ext_modules=cythonize(extensions, language_level=3))
