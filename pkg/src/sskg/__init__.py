"""Finite self-similar k-graphs and the combinatorics behind their C*-algebras."""

__version__ = "0.1.0"
