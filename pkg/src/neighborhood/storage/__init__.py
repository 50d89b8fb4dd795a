"""Durable side of the pipeline: frame store and the HTTP service over it."""

from .db import FrameStore

__all__ = ["FrameStore"]
