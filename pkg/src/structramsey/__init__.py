"""Finite-scale workbench for structural Ramsey theory on relational structures."""

__version__ = "0.1.0"
