from os import path

from setuptools import find_packages, setup

# Get the version from tflow/version.py without importing the package
exec(compile(open('tflow/version.py').read(), 'tflow/version.py', 'exec'))


def readme():
    this_directory = path.abspath(path.dirname(__file__))
    with open(path.join(this_directory, 'README.md'), encoding='utf-8') as f:
        return f.read()


setup(
    name='translating-flow',
    version=__version__,
    description='Mean curvature flow with Neumann data on a Riemannian disk, translators and their verification',
    long_description=readme(),
    long_description_content_type='text/markdown',
    license='GPL-3.0',
    packages=find_packages(exclude=['tests', 'tests.*', 'examples', 'examples.*']),
    include_package_data=True,
    entry_points={
        'console_scripts': [
            'tflow = tflow.main:main',
        ],
    },
    python_requires='>=3.8',
    install_requires=[
        'colorama>=0.4.6',
        'colorlog>=6.7.0',
        'numpy>=1.22',
        'scipy>=1.9',
        'sentry_sdk>=0.13.5',
        'sympy>=1.10',
    ],
    extras_require={
        'test': [
            'hypothesis>=6.0',
            'pytest>=7.0',
        ],
    },
    classifiers=[
        'Development Status :: 4 - Beta',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: GNU General Public License v3 (GPLv3)',
        'Programming Language :: Python :: 3 :: Only',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
    zip_safe=False,
)
