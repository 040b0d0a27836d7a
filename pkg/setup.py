#!/usr/bin/env python
'''
The setup script for SUnProp
'''

import io
import os
import sys

SETUP_KWARGS = {
    'scripts': [
        'scripts/sunprop',
    ]
}
USE_SETUPTOOLS = False

# Change to the source directory prior to running any command
try:
    SETUP_DIRNAME = os.path.dirname(__file__)
except NameError:
    # We're most likely being frozen and __file__ triggered this NameError
    SETUP_DIRNAME = os.path.dirname(sys.argv[0])

if SETUP_DIRNAME != '':
    os.chdir(SETUP_DIRNAME)


try:
    from setuptools import setup
    USE_SETUPTOOLS = True
    SETUP_KWARGS['install_requires'] = ['numpy>=1.17', 'scipy>=1.6', 'PyYAML>=5.1', 'psutil']
    SETUP_KWARGS['extras_require'] = {'docs': ['sphinx']}
    SETUP_KWARGS['python_requires'] = '>=3.8'
    SETUP_KWARGS['entry_points'] = {
        'console_scripts': [
            'sunprop = sunprop.cli:main',
        ]
    }
except ImportError:
    USE_SETUPTOOLS = False


if USE_SETUPTOOLS is False:
    from distutils.core import setup

with io.open(os.path.join(SETUP_DIRNAME, 'sunprop', 'version.py'), encoding='utf-8') as fh_:
    exec(  # pylint: disable=exec-used
        compile(
            fh_.read(),
            os.path.join(SETUP_DIRNAME, 'sunprop', 'version.py'),
            'exec'
        )
    )


NAME = 'SUnProp'
VERSION = __version__  # pylint: disable=undefined-variable
DESCRIPTION = (
    'Semiclassical SU(n) coherent-state propagation of Bose-Einstein condensates'
)

setup(
    name=NAME,
    version=VERSION,
    description=DESCRIPTION,
    author='The SUnProp Team',
    classifiers=[
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Development Status :: 4 - Beta',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: Apache Software License',
        'Operating System :: POSIX :: Linux',
        'Topic :: Scientific/Engineering :: Physics',
    ],
    packages=[
        'sunprop',
    ],
    **SETUP_KWARGS
)
