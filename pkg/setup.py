import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; ringcast.kernels falls back
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("RINGCAST_NO_EXT"):
    ext_modules = cythonize(
        [Extension("ringcast._core", ["src/ringcast/_core.pyx"],
                   extra_compile_args=["-O3"])],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
