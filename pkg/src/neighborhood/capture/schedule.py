"""Channel-hop scheduling for a single-radio passive scanner.

A radio can only sit on one channel at a time, so a scan is a sequence of
dwell segments. The schedule is the contract between capture and analysis:
replay uses it to drop frames a hopping radio could not have heard, and the
sweep time it implies (dwell x hops) is what an operator waits for a full
pass over the band.
"""

import math
from dataclasses import dataclass, field

from ..errors import InvalidConfig

WIFI_CHANNELS = tuple(range(1, 14))
ZIGBEE_CHANNELS = tuple(range(11, 27))
BLE_ADVERTISING_CHANNELS = (37, 38, 39)

DEFAULT_DWELL_S = 30.0
DEFAULT_REFRESH_S = 2.0


@dataclass
class ScanConfig:
    """What to scan and for how long.

    channels is the hop list in visit order; hops is how many dwell
    segments to schedule (the list is cycled if hops exceeds its length).
    """

    protocol: str
    channels: "list[int]" = field(default_factory=list)
    dwell_s: float = DEFAULT_DWELL_S
    hops: "int | None" = None
    refresh_s: float = DEFAULT_REFRESH_S

    @classmethod
    def wifi_default(cls) -> "ScanConfig":
        return cls(protocol="wifi", channels=list(WIFI_CHANNELS))

    @classmethod
    def zigbee_default(cls) -> "ScanConfig":
        return cls(protocol="zigbee", channels=list(ZIGBEE_CHANNELS))

    @classmethod
    def ble_default(cls) -> "ScanConfig":
        return cls(protocol="ble", channels=list(BLE_ADVERTISING_CHANNELS))

    def validate(self) -> None:
        if self.protocol not in ("wifi", "ble", "zigbee"):
            raise InvalidConfig(f"unknown protocol {self.protocol!r}")
        if not self.channels:
            raise InvalidConfig("channel list is empty")
        if len(set(self.channels)) != len(self.channels):
            raise InvalidConfig("channel list repeats a channel")
        for ch in self.channels:
            if not isinstance(ch, int) or ch < 0:
                raise InvalidConfig(f"bad channel {ch!r}")
        if not (self.dwell_s > 0 and math.isfinite(self.dwell_s)):
            raise InvalidConfig(f"dwell must be a positive number, got {self.dwell_s!r}")
        if self.hops is not None and self.hops < 1:
            raise InvalidConfig(f"hops must be at least 1, got {self.hops}")
        if not (self.refresh_s > 0 and math.isfinite(self.refresh_s)):
            raise InvalidConfig(f"refresh must be a positive number, got {self.refresh_s!r}")

    def to_doc(self) -> dict:
        return {
            "protocol": self.protocol,
            "channels": list(self.channels),
            "dwell_s": self.dwell_s,
            "hops": self.hops,
            "refresh_s": self.refresh_s,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "ScanConfig":
        if not isinstance(doc, dict):
            raise InvalidConfig("config must be an object")
        allowed = {"protocol", "channels", "dwell_s", "hops", "refresh_s"}
        unknown = set(doc) - allowed
        if unknown:
            raise InvalidConfig(f"unknown config keys: {sorted(unknown)}")
        try:
            cfg = cls(
                protocol=doc["protocol"],
                channels=list(doc.get("channels") or []),
                dwell_s=float(doc.get("dwell_s", DEFAULT_DWELL_S)),
                hops=None if doc.get("hops") is None else int(doc["hops"]),
                refresh_s=float(doc.get("refresh_s", DEFAULT_REFRESH_S)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidConfig(f"bad config document: {exc}") from exc
        cfg.validate()
        return cfg


@dataclass(frozen=True)
class HopSegment:
    channel: int
    start_s: float
    end_s: float


@dataclass
class HopSchedule:
    """Dwell segments laid end to end from t=0."""

    segments: "list[HopSegment]"

    @property
    def total_duration_s(self) -> float:
        return self.segments[-1].end_s if self.segments else 0.0

    @property
    def channels(self) -> "list[int]":
        return [seg.channel for seg in self.segments]

    def channel_at(self, t_s: float) -> "int | None":
        """Channel the radio sits on at time t, None once the scan is over."""
        if t_s < 0:
            return None
        for seg in self.segments:
            if seg.start_s <= t_s < seg.end_s:
                return seg.channel
        return None

    def contains(self, channel: int, t_s: float) -> bool:
        """Could a frame on this channel at this offset have been heard?"""
        return self.channel_at(t_s) == channel


def build_hop_schedule(config: ScanConfig) -> HopSchedule:
    """Lay out dwell segments for the configured scan.

    hops=None means one pass over the channel list; any larger count keeps
    cycling the list, which is how a long-running sweep actually behaves.
    """
    config.validate()
    hops = config.hops if config.hops is not None else len(config.channels)
    segments = []
    for i in range(hops):
        channel = config.channels[i % len(config.channels)]
        start = i * config.dwell_s
        segments.append(HopSegment(channel, start, start + config.dwell_s))
    return HopSchedule(segments)


def sweep_time_s(config: ScanConfig) -> float:
    """Seconds for one full pass over the channel list at the set dwell."""
    return config.dwell_s * len(config.channels)
