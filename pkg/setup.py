# read the contents of your README file
from os import path

from setuptools import find_packages, setup

this_directory = path.abspath(path.dirname(__file__))
with open(path.join(this_directory, "README.md"), encoding="utf-8") as f:
    long_description = f.read()

setup(
    name="localsim",
    packages=[package for package in find_packages() if package.startswith("localsim")],
    install_requires=[
        "numpy>=1.23",
        "networkx>=2.6",
        "pyyaml",
        "tqdm",
        "termcolor",
    ],
    extras_require={
        "test": ["pytest"],
    },
    entry_points={
        "console_scripts": [
            "localsim=localsim.scripts.run:main",
        ],
    },
    package_data={"localsim": ["models/assets/groups/*.yaml", "models/assets/elements/*.txt"]},
    include_package_data=True,
    python_requires=">=3.8",
    description="localsim: exact computations in local similarity groups of ultrametric spaces",
    version="0.1.0",
    long_description=long_description,
    long_description_content_type="text/markdown",
)
