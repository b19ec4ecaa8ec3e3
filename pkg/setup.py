import os

import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

ext = Extension(
    "shintani_cones.zeta._shell_kernel",
    ["src/shintani_cones/zeta/_shell_kernel.pyx"],
    include_dirs=[np.get_include()],
    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    extra_compile_args=["-O3", "-ffp-contract=off"],
)

if os.environ.get("SHINTANI_CONES_NO_EXT"):
    setup()
else:
    setup(ext_modules=cythonize([ext], language_level=3))
