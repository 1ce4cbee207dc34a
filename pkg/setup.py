from setuptools import find_packages, setup

setup(
    name='qsg',
    version='1.0.0',
    license="MIT",
    description='Numerical verification of spectral mapping theorems for quasi-semigroups on C^n',
    long_description='Checks the axioms of quasi-semigroups of matrices, the identities linking a ' +
                     'time-dependent generator A(t) to its propagator R(t, s), and the inclusions of ' +
                     'kernels, ranges and spectra they imply, emitting deterministic PASS/FAIL reports.',
    packages=find_packages(exclude=['qsg.tests']),
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'License :: MIT License',
        'Operating System :: OS Independent',
        'Programming Language :: Python :: 3.x',
        'Topic :: Scientific/Engineering :: Mathematics'
    ],
    python_requires='>=3.9',
    install_requires=['numpy', 'scipy', 'pydantic>=2', 'PyYAML'],
    entry_points={'console_scripts': ['qsg=qsg.harness.cli:main']},
)
