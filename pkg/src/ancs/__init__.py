"""Photon statistics and Helstrom bounds for AN-class coherent states."""

__version__ = "0.1.0"
