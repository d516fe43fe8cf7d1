"""Client package for the d2dsim wire protocol."""

from .client import FlatView, ProtocolError, RemoteEnv

__all__ = ["FlatView", "ProtocolError", "RemoteEnv"]

__version__ = "0.1.0"
