"""Cubical chain maps, certified l1 fillings and hyperbolic volume tools."""

__version__ = "0.1.0"
