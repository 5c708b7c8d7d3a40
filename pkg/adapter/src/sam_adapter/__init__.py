"""Adapter wrapping promptable segmentation behind the detection
exchange protocol: PNG in, one JSON document on stdout."""

__version__ = "0.1.0"

from .config import AdapterConfig

__all__ = ["AdapterConfig"]
