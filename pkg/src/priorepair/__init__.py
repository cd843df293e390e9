"""Query answering over inconsistent knowledge bases under prioritized repairs."""

__version__ = "0.1.0"
