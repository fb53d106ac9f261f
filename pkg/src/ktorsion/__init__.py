"""Gamma filtration and codimension-2 torsion for products of Severi-Brauer
varieties and quadric surfaces, computed with exact integer lattices."""

__version__ = "0.1.0"
