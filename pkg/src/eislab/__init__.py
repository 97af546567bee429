"""Exact-arithmetic toolkit for cusp divisor class orders and Eisenstein ideal indices on X0(N)."""

__version__ = "0.1.0"
