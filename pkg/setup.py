"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""
from setuptools import setup
import os


def get_package_data():
    data = ['core/conf/config.json']
    cur_dir = os.getcwd()
    os.chdir("pytxalloc")
    for root, _, files in os.walk(os.path.join("core", "cases")):
        data.extend(os.path.join(root, f) for f in files if not f.endswith(".py"))
    os.chdir(cur_dir)
    return data


setup(
    name="PyTxAlloc",
    version="0.3.0",
    author="PyTxAlloc contributors",
    description="Transmission and generation expansion planning under uncertainty with beneficiaries-pay "
                "cost allocation",
    license="MIT",
    keywords="transmission planning stochastic optimization cost allocation",
    packages=["pytxalloc",
              "pytxalloc.core",
              "pytxalloc.core.errors",
              "pytxalloc.core.conf",
              "pytxalloc.core.cases"],
    package_data={'pytxalloc': get_package_data()
                  },
    entry_points={
            'console_scripts': [
                'pta=pytxalloc.pytxalloc:main',
            ],
    },
    classifiers=[
            "Development Status :: 3 - Alpha",
            "Topic :: Scientific/Engineering :: Mathematics"
    ],
    python_requires=">=3.8",
    install_requires=[
        'numpy',
        'scipy>=1.9',
        'pandas>=1.5',
        'networkx',
        'highspy'
    ],
)
