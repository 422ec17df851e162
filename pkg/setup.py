"""Build the optional Cython kernels; the package falls back to pure Python without them."""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover
    cythonize = None

extensions = [
    Extension(
        "kinklab._kernels",
        ["src/kinklab/_kernels.pyx"],
        extra_compile_args=["-O3"],
        optional=True,
    )
]

if cythonize is not None:
    ext_modules = cythonize(
        extensions,
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
else:
    ext_modules = []

setup(ext_modules=ext_modules)
