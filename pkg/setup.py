"""A setuptools based setup module.
See:
https://packaging.python.org/guides/distributing-packages-using-setuptools/
https://github.com/pypa/sampleproject
"""

# Always prefer setuptools over distutils
from setuptools import setup
import pathlib
import os
import sys
sys.path.append("dickequiv")
import version
import json

info = version.version_info
data = [info["git_origin"], info["git_hash"], info["git_description"], info["git_branch"]]
with open(os.path.join('dickequiv', 'GIT_INFO'), 'w') as outfile:
    json.dump(data, outfile)


def package_files(package_dir, subdirectory):
    # walk the input package_dir/subdirectory
    # return a package_data list
    paths = []
    directory = os.path.join(package_dir, subdirectory)
    for (path, directories, filenames) in os.walk(directory):
        for filename in filenames:
            path = path.replace(package_dir + '/', '')
            paths.append(os.path.join(path, filename))
    return paths

here = pathlib.Path(__file__).parent.resolve()
long_description = (here / 'README.md').read_text(encoding='utf-8')
data_files = package_files('dickequiv', 'data') + ['VERSION', 'GIT_INFO']

setup(
    name='dickequiv',  # Required
    version=version.version,  # Required
    description='Finite-N and thermodynamic-limit tests of effective spin Hamiltonians for the Dicke model.',
    long_description=long_description,  # Optional
    long_description_content_type='text/markdown',  # Optional (see note above)
    classifiers=[
        'Development Status :: 3 - Alpha',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.7',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3 :: Only',
    ],
    keywords='Dicke model, superradiance, exact diagonalization, mean field, effective Hamiltonian',
    package_dir={'dickequiv': 'dickequiv'},
    packages=['dickequiv', 'dickequiv.data', 'dickequiv.tests'],
    python_requires='>=3.7, <4',
    install_requires=[
                      'numpy',
                      'scipy>=1.2',
                      'tensorflow>=2.4.0',
                      'tqdm',
                      ],
    extras_require={'test': ['pytest']},
    include_package_data=True,
    scripts = ['scripts/dickequiv_run.py'],
    package_data={'dickequiv': data_files},
    zip_safe = False,
    )
