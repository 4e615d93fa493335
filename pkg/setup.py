from setuptools import Extension, setup
from Cython.Build import cythonize

# -ffp-contract=off keeps the compiled escape kernel bit-identical to the
# pure-Python fallback (no FMA contraction of the orbit arithmetic).
ext = Extension(
    "detlab.toyworlds._escape",
    sources=["src/detlab/toyworlds/_escape.pyx"],
    extra_compile_args=["-O2", "-ffp-contract=off"],
)

setup(ext_modules=cythonize([ext], language_level=3))
