"""Approximation machinery for maximum weight independent set of polygons."""

__version__ = "0.1.0"
