"""Topological subsystem codes: construction, scheduling, decoding, thresholds."""

__version__ = "0.1.0"
