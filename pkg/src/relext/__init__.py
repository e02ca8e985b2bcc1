"""Relative extriangulated structures on small explicit categories."""

__version__ = "0.1.0"
