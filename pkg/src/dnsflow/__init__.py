"""Demand not served, generation not served and wheeling loss via DC load flow,
with a max-flow/min-cut baseline for comparison."""

__version__ = "0.1.0"
