from setuptools import setup, find_packages

setup(
    name="semibertrand",
    version="0.1.0",
    packages=find_packages(include=["semibertrand", "semibertrand.*"]),
    python_requires=">=3.10",
    install_requires=[
        "numpy>=1.26",
        "scipy>=1.11",
        "pydantic>=2.6.0",
        "pydantic-settings>=2.1.0",
        "python-dotenv>=1.0.1",
        "typer>=0.15.1",
        "rich>=13.9.4",
        "tomli>=1.1; python_version < '3.11'",
    ],
    entry_points={"console_scripts": ["semibertrand=semibertrand.cli.main:main"]},
)
