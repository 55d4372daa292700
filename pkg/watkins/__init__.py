"""Modular-degree and congruence-number bounds for quadratic twists of elliptic curves."""

__version__ = "0.1.0"
