"""Dimer coverings of rail yard graphs: partition functions, correlations and sampling."""

__version__ = "0.1.0"
