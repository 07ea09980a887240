#!/usr/bin/env python3
"""
Packaging for the TwinWL toolkit.

Installs the `app` package and the `twinwl` command-line entry point:

    pip install -e .
    twinwl --help
"""

from pathlib import Path

from setuptools import find_namespace_packages, setup


def read_requirements():
    """Runtime requirements from requirements.txt, test tools excluded"""
    path = Path(__file__).parent / "requirements.txt"
    if not path.exists():
        return []
    skip = {"pytest", "httpx"}
    return [
        line.strip()
        for line in path.read_text().splitlines()
        if line.strip() and not line.startswith("#") and line.strip() not in skip
    ]


setup(
    name="twinwl",
    version="1.0.0",
    description="Twin-width, twin-width-1 canonization and Weisfeiler-Leman toolkit",
    python_requires=">=3.9",
    packages=find_namespace_packages(include=["app", "app.*"]),
    install_requires=read_requirements(),
    extras_require={"test": ["pytest", "httpx"]},
    entry_points={"console_scripts": ["twinwl=app.cli:main"]},
)
