"""Exact checks of Capelli-type identities over noncommutative rings."""

__version__ = "0.1.0"
