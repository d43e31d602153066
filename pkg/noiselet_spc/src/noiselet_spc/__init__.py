"""Noiselet sensing toolkit for compressive single-pixel imaging."""

__version__ = '0.1.0'
