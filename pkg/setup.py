"""Build the optional compiled arithmetic kernel.

The package works without it: ``cqsl2.kernel`` falls back to the pure-Python
implementation when the extension is missing. Set CQSL2_NO_EXT=1 to skip it.
"""

import os

from setuptools import Extension, setup


def _extensions():
    if os.environ.get("CQSL2_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension("cqsl2._kernel", ["src/cqsl2/_kernel.pyx"])
    return cythonize([ext], language_level=3, compiler_directives={"binding": False})


setup(ext_modules=_extensions())
