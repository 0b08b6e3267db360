"""HTTP service wrapping the alignment engine."""

from .app import app

__all__ = ["app"]
