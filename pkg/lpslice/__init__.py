"""Sections and projections of lp balls through their probabilistic representations."""

__version__ = "1.0.0"
