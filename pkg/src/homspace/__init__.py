"""Exact computation of cohomology of homogeneous spaces and biquotients."""

__version__ = "0.1.0"
