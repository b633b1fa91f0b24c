import glob

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

# The extension compiles the whole C++ core plus the binding layer; the
# CMake build remains the route for the CLI and the test suite.
ext = Pybind11Extension(
    "rsgdim._core",
    sorted(glob.glob("src/*.cpp")),
    include_dirs=["include", "vendor"],
    libraries=["z"],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
