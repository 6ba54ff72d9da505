"""Euler characteristics of subgroup posets and orbit categories of finite groups."""

__version__ = "0.1.0"
