from setuptools import setup

# Root-level manifest so the package can be installed from the repository
# root; mirrors noiselet_spc/setup.py with paths relative to this directory.
setup(
    name='noiselet_spc',
    version='0.1.0',
    description='Noiselet sensing matrices for compressive single-pixel imaging',
    packages=['noiselet_spc', 'noiselet_spc.transforms', 'noiselet_spc.sensing',
              'noiselet_spc.recon', 'noiselet_spc.experiments'],
    package_dir={'': 'noiselet_spc/src'},
    package_data={'noiselet_spc': ['config/*.yaml']},
    python_requires='>=3.9',
    install_requires=['pyyaml', 'numpy', 'scipy', 'pandas', 'pillow', 'scikit-image'],
    entry_points={'console_scripts': ['noiselet-spc = noiselet_spc.cli:main']},
)
