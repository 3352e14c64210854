import os

from setuptools import setup

ext_modules = []
if os.environ.get("AGT_NO_CYTHON", "") in ("", "0"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            ["src/agt/_ckernels.pyx"],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
