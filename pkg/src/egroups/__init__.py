"""Finite 3-generator p-groups G(p, r, t, T), their endomorphisms and the E-group property."""

__version__ = "0.1.0"
