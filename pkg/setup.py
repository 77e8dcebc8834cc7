from setuptools import setup, find_packages

setup(
    name="distrank",
    version="0.1.0",
    description="distrank - generalized rank of a PSD matrix sharded across simulated machines, with exact communication accounting",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    install_requires=[
        "numpy>=1.24",
        "scipy>=1.10",
        "python-dotenv>=1.0.0",
        "aiofiles>=23.0.0",
        "pydantic>=2.0.0",
        "pydantic-settings>=2.0.0",
        "structlog>=24.0.0",
        "click>=8.1",
    ],
    extras_require={
        "test": ["pytest>=7.0"],
    },
    python_requires=">=3.10",
    entry_points={
        "console_scripts": [
            "distrank=distrank.cli:cli",
        ],
    },
)
