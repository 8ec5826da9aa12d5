"""Exact λ-bracket calculus for Lie conformal superalgebras and their modules."""

__version__ = "0.1.0"
