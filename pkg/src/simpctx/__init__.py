"""Exact simplicial tools for contextuality."""

__version__ = "0.1.0"
