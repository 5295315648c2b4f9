"""Exact and numerical tools for nice symmetric pairs and invariant eigendistributions."""

__version__ = "0.1.0"
