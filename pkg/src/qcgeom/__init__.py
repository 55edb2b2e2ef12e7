"""Exact verification engine for quaternionic contact structures."""
__version__ = "0.1.0"
