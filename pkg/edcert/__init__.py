"""Certified bounds for the essential dimension of isogenies of abelian varieties."""

__version__ = "1.0.0"
