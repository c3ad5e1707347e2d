from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

sources = [
    "bindings/lllforge_py.cpp",
    "src/model.cpp",
    "src/witness.cpp",
    "src/engine.cpp",
    "src/derand.cpp",
    "src/parallel.cpp",
    "src/adapters.cpp",
]

setup(
    ext_modules=[
        Pybind11Extension(
            "_lllforge",
            sources,
            include_dirs=["include", "vendor"],
            cxx_std=20,
        )
    ],
    cmdclass={"build_ext": build_ext},
)
