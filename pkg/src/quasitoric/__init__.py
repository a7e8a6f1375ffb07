"""Exact computations for quasitoric manifolds over products of simplices and their vertex cuts."""

__version__ = "0.1.0"
