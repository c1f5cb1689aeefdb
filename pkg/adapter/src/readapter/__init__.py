"""Transformer relation classifier served over the oracle wire protocol."""

__version__ = "0.1.0"
