# Copyright (c) the zipchow authors. All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

from setuptools import find_packages, setup

setup(
    name='zipchow',
    version='0.1.0',
    description='Exact Chow ring computations for stacks of G-zips',
    packages=find_packages(exclude=['tests']),
    package_data={'zipchow': ['fixtures/*.json']},
    python_requires='>=3.8',
    install_requires=[
        'numpy',
        'pandas>=1.1',
        'sympy>=1.12',
        'tqdm>=4.46.1',
    ],
    extras_require={
        'test': ['pytest'],
        'git': ['gitpython'],
    },
    entry_points={
        'console_scripts': ['zipchow=zipchow.cli:main'],
    },
)
