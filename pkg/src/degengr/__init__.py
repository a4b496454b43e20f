"""Curvature of degenerate metrics, the densitized Einstein equation, and
Schwarz-Christoffel strip foliations of Penrose-Carter diagrams."""

__version__ = "0.1.0"
