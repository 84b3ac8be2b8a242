"""Partitioning and covering edge sets of perfect graphs by comparability subgraphs."""

__version__ = "0.1.0"
