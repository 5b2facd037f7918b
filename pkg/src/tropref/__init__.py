"""Exact counts of rational tropical curves with refined multiplicities."""

__version__ = "0.1.0"
