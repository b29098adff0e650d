"""Genus-2 curves with quaternionic multiplication over imaginary quadratic
fields: conic-parametrized candidate search, exact point counting, residual
Galois diagnostics, and trace comparison against Bianchi newform data."""

__version__ = "0.1.0"
