"""Toric LeBrun and Joyce metrics on n#CP^2 with pointwise verification tools."""

__version__ = "0.1.0"
