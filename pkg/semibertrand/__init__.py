"""Frenet apparatuses and Bertrand mates of timelike curves in semi-Euclidean spaces."""

__version__ = "0.1.0"
