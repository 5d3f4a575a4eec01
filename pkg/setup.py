from setuptools import setup, find_packages

setup(
    name="heat_inverse",
    version="1.0.0",
    packages=find_packages(include=["heat_inverse", "heat_inverse.*"]),
    python_requires=">=3.9",
    install_requires=["numpy>=1.24", "pandas>=2.0", "tqdm>=4.60"],
    extras_require={"test": ["pytest>=7.0", "scipy>=1.10"]},
    entry_points={"console_scripts": ["heat-inverse=heat_inverse.cli_io.cli:main"]},
)
