"""Multilingual binary hate speech classification experiments."""

__version__ = "0.1.0"
