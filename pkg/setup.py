"""Build script for the optional compiled tag-scanner extension.

The package works without the extension (a pure-Python scanner is selected
at import time), so a failed compilation only costs speed, never function.
"""

from setuptools import Extension, setup


def extensions() -> list[Extension]:
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        [Extension("rasaeco._scan_c", ["src/rasaeco/_scan_c.pyx"])],
        language_level="3",
    )


setup(ext_modules=extensions())
