"""Exact Abban-Zhuang style delta-invariant computations on surfaces and threefolds."""

__version__ = "0.1.0"
