from setuptools import setup, find_packages

install_requires = [
    'torch>=1.3.0',
    'numpy>=1.17',
    'scipy>=1.3',
    'pandas>=0.25',
    'tqdm>=4.36',
    'networkx>=2.4',
]

setup(
    name='uihpq',
    version='0.0.1',
    description='Random quadrangulations with a boundary: BDG bijection, Boltzmann samplers and UIHPQ_p',
    license='license.txt',
    packages=find_packages(exclude=['tests']),
    include_package_data = True,
    platforms = "any",
    zip_safe=False,
    install_requires=install_requires,
    extras_require={
        'test': ['pytest>=5.0'],
    },
    entry_points={
        'console_scripts': [
            'uihpq=uihpq.lab.cli:main',
        ],
    },
)
