"""Exact computations over graded complete intersection rings."""
__version__ = "0.1.0"
