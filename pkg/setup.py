"""
Setup file for editable installs with older tooling.
Package metadata lives in pyproject.toml.
"""
from setuptools import setup

setup()
