"""Equimultiple loci of algebroid surfaces under quadratic and monoidal transforms."""

__version__ = "0.1.0"
