"""Signed Shintani cone domains for number fields with one complex place."""

__version__ = "0.1.0"
