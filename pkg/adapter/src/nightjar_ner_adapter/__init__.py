"""Stdio NDJSON adapter exposing an English NER model."""

from .backends import BackendUnavailable, load_backend
from .server import serve

__version__ = "0.1.0"

__all__ = ["BackendUnavailable", "load_backend", "serve", "__version__"]
