"""Eigenvalue-resolved decompositions of discrete Stein equation solutions."""

__version__ = "0.1.0"
