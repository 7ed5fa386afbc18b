"""Exact-arithmetic verification suite for perfect fractional matching formulas."""

__version__ = "0.1.0"
