"""Exact Newton polytopes, mixed volumes and certified generic root counts
for Laurent span systems, with algebraic Kuramoto networks as the main
application."""

__version__ = "0.1.0"
