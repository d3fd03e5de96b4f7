"""Congruences between truncated Euler characteristics of Selmer groups of p-congruent elliptic curves."""

__version__ = "0.1.0"
