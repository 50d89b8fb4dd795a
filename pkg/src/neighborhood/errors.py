"""Error types shared across the capture, parse and serve layers.

Per-frame parse failures all derive from FrameParseError so that bulk
consumers (replay, fuzzing, live capture) can count and skip them with a
single except clause instead of crashing the pipeline.
"""


class FrameParseError(Exception):
    """A single frame could not be decoded."""


class TruncatedFrame(FrameParseError):
    """Frame ends before a field the header promised."""


class UnknownType(FrameParseError):
    """802.11 type bits name a type that does not exist (type 3)."""


class ReservedFrameType(FrameParseError):
    """802.15.4 frame type or addressing mode is a reserved encoding."""


class BadLength(FrameParseError):
    """BLE PDU length byte disagrees with the bytes actually present."""


class MalformedElement(FrameParseError):
    """A tagged element (SSID, AD structure) overruns or breaks its rules."""


class InvalidConfig(ValueError):
    """Scan configuration violates its own constraints."""


class InvalidSpec(ValueError):
    """Scenario description is inconsistent or names an unknown profile."""


class UnsupportedLinkType(Exception):
    """Capture file uses a link type this pipeline does not speak."""


class CorruptFile(Exception):
    """Capture container structure is broken (magic, truncated record)."""


class MixedLinkTypes(Exception):
    """Raw spool asked to put frames of different link types in one file."""


class SinkUnavailable(Exception):
    """Delivery target refused or never answered; batch was not accepted."""


class KeyMismatch(ValueError):
    """Prediction and truth tables do not cover the same devices."""
