"""Exact carries chain, Foulkes characters and Eulerian idempotents."""

__version__ = "0.1.0"
