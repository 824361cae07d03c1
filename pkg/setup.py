from setuptools import setup, find_packages

setup(
    name="residual_intersection",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "examples", "examples.*"]),
    install_requires=[
        "fastapi",
        "uvicorn",
        "python-dotenv",
        "redis",
        "pydantic",
        "pydantic-settings",
        "prometheus_client",
        "sympy"
    ],
    extras_require={
        "test": ["pytest", "httpx"],
    },
    entry_points={
        "console_scripts": ["intersect=src.cli:main"],
    },
)
