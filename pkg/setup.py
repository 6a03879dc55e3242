from setuptools import find_packages, setup

with open("requirements.txt") as f:
    requirements = f.read().splitlines()
setup(
    name="dstit",
    version="0.1",
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={
        "dstit": ["config.toml"],
    },
    install_requires=requirements,
    extras_require={
        "test": ["pytest==8.3.3"],
    },
    entry_points={
        "console_scripts": [
            "dstit=dstit.command_line:main",
        ],
    },
)
