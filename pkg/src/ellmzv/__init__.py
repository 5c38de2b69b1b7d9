"""Exact q-expansions and dimension checks for A-elliptic multiple zeta values."""

__version__ = "0.1.0"
