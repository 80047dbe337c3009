"""Numerical checks of quasi-local Penrose inequalities in spherical symmetry."""

__version__ = "0.1.0"
