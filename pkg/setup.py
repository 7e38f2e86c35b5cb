import sys

from setuptools import setup

# The compiled kernels are an optional speedup.  Everything has a pure
# Python twin, so a missing compiler or Cython must not break the install.
ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/diastolic/_kernels.pyx"],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build environment dependent
    sys.stderr.write("diastolic: building without compiled kernels (%s)\n" % exc)

setup(ext_modules=ext_modules)
