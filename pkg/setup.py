# Builds the optional Cython kernels; the package falls back to
# semideriv._pykernels when the extension is missing.
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("semideriv._ckernels", ["src/semideriv/_ckernels.pyx"], extra_compile_args=["-O3"])],
        language_level=3,
    )

setup(ext_modules=ext_modules)
