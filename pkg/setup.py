import os

from setuptools import setup

ext_modules = []
if os.environ.get("SLOPEDRAW_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/slopedraw/verify/_kernels.pyx"],
            compiler_directives={"language_level": "3"},
        )
    except Exception as exc:  # pragma: no cover - build box without cython
        print(f"slopedraw: building without compiled kernels ({exc})")

setup(ext_modules=ext_modules)
