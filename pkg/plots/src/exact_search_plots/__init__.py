"""Chart scripts for exact-search CSV outputs."""

__version__ = "0.1.0"
