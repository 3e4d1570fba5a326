"""Exact weight multiplicities of multi-variable Weyl modules for gl_r."""

__version__ = "0.1.0"
