from setuptools import setup, find_packages

setup(
    name='radarfield',
    version="0.1.0",
    license="Apache 2",
    packages=find_packages(include=["radarfield", "radarfield.*"]),
    include_package_data=True,
    install_requires=["numpy", "scipy"],
    entry_points={"console_scripts": ["radarfield=radarfield.experiments.cli:main"]},
)

# pip install .
