"""Cubical small cancellation toolkit."""

__version__ = "0.1.0"
