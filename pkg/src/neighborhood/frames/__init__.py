"""Frame model, per-protocol parsers and byte-level builders."""

from .model import CaptureMeta, ConnectionParams, FrameRecord

__all__ = ["CaptureMeta", "ConnectionParams", "FrameRecord"]
