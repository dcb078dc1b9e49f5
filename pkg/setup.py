import sys

from setuptools import setup

# The compiled kernel is optional: the package falls back to the pure-Python
# backend when the extension is unavailable (see qamlab.backend).
ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/qamlab/_kernel_c.pyx"],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover
    print(f"warning: building without compiled kernel ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
