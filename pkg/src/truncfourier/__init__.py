"""Truncated Fourier operator on L^2(0, inf) and its unitary diagonalisation by a 2x2 multiplier."""

__version__ = "0.1.0"
