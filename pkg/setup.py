import os

from setuptools import setup

ext_modules = []
# no FMA contraction: the predicates must round exactly like the Python fallback
compile_args = ["-O3", "-ffp-contract=off"]
if os.environ.get("VQHULL_PORTABLE") != "1":
    compile_args.append("-march=native")
if os.environ.get("VQHULL_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "vqhull._kernels",
                    ["src/vqhull/_kernels.pyx"],
                    include_dirs=[np.get_include(), "src/vqhull"],
                    depends=["src/vqhull/_simd.h"],
                    extra_compile_args=compile_args,
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "initializedcheck": False,
            },
        )

setup(ext_modules=ext_modules)
