import os
import sys

from setuptools import setup, Command, find_packages

# Pull version from source without importing
# since we can't import something we haven't built yet :)
exec(open('sdlab/version.py').read())


class Tox(Command):

    user_options = []

    def initialize_options(self):
        pass

    def finalize_options(self):
        pass

    @classmethod
    def run(cls):
        import tox
        sys.exit(tox.cmdline([]))


test_require = ['tox', 'pytest', 'pytest-mock']

here = os.path.abspath(os.path.dirname(__file__))

with open(os.path.join(here, 'README.rst')) as f:
    README = f.read()

setup(
    name="sdlab",
    version=__version__,

    install_requires=['numpy>=1.17', 'scipy'],
    extras_require={'plots': ['matplotlib']},
    tests_require=test_require,
    cmdclass={"test": Tox},
    packages=find_packages(exclude=['test']),
    entry_points={
        'console_scripts': ['sdlab=sdlab.lab.cli:main'],
    },
    license="Apache License 2.0",
    description="Toy-scale laboratory for the spectral behaviour of diffusion models",
    long_description=README,
    keywords="diffusion wavelet spectrum distillation",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: Apache Software License",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.7",
        "Programming Language :: Python :: 3.8",
        "Topic :: Scientific/Engineering :: Artificial Intelligence",
    ]
)
