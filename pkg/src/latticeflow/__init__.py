"""Exact toolkit for flow polytopes, lattice points, subdivisions, and toric ideals."""

__version__ = "0.1.0"
