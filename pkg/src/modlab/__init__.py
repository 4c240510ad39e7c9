"""Numerical laboratory for modular theory of standard subspaces,
second quantization, and the free scalar field in two dimensions."""

__version__ = "0.1.0"
