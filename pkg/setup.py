"""Build script: compiles the optional interaction kernel.

The package works without the extension (a NumPy implementation is selected
at import time), so any build failure here degrades to the pure-Python
backend instead of failing the install.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/wavefarm/hydro/_interaction_cy.pyx"],
        language_level="3",
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"wavefarm: skipping compiled kernel ({exc}); pure-Python backend will be used")

setup(ext_modules=ext_modules)
