"""Per-node traffic accounting over a window of frames.

Counts live in plain integers and the two ratios come out as exact
fractions, so aggregating twice over half-windows and merging gives the
same answer as one pass; no float drift to reason about.

Attribution rules: a frame's bytes count as sent for its src and as
received for its dst, dst only when unicast. Frames with neither address
(acks, BLE data PDUs) touch no node. Each frame lands in one of three
classes: management (beacons, probes, advertising, Zigbee beacons and MAC
commands), control (802.11 control, BLE LL control, Zigbee acks), or data.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .frames.address import classify_address

# kind -> traffic class; kind strings are unique across protocols
KIND_CLASS = {
    "management": "m",
    "advertising": "m",
    "beacon": "m",
    "mac_command": "m",
    "control": "c",
    "data_control": "c",
    "ack": "c",
    "data": "d",
}

_COUNTERS = (
    "m_frames_sent", "c_frames_sent", "d_frames_sent",
    "m_frames_recv", "c_frames_recv", "d_frames_recv",
    "m_bytes_sent", "c_bytes_sent", "d_bytes_sent",
    "m_bytes_recv", "c_bytes_recv", "d_bytes_recv",
)


def _wire_ratio(value) -> "float | None":
    # JSON has no Infinity; a send-only node's unbounded ratio goes out as
    # null, same as undefined. The raw counters keep the two cases apart.
    if value is None or value == float("inf"):
        return None
    return float(value)


@dataclass
class NodeStats:
    """What one address did inside the window."""

    address: str
    protocol: str
    m_frames_sent: int = 0
    c_frames_sent: int = 0
    d_frames_sent: int = 0
    m_frames_recv: int = 0
    c_frames_recv: int = 0
    d_frames_recv: int = 0
    m_bytes_sent: int = 0
    c_bytes_sent: int = 0
    d_bytes_sent: int = 0
    m_bytes_recv: int = 0
    c_bytes_recv: int = 0
    d_bytes_recv: int = 0
    channels: "set[int]" = field(default_factory=set)
    first_seen_us: "int | None" = None
    last_seen_us: "int | None" = None

    # ------------------------------------------------------------ totals

    @property
    def frames_total(self) -> int:
        return sum(getattr(self, n) for n in _COUNTERS[:6])

    @property
    def bytes_total(self) -> int:
        return sum(getattr(self, n) for n in _COUNTERS[6:])

    @property
    def data_bytes_total(self) -> int:
        return self.d_bytes_sent + self.d_bytes_recv

    @property
    def m_bytes(self) -> int:
        return self.m_bytes_sent + self.m_bytes_recv

    @property
    def c_bytes(self) -> int:
        return self.c_bytes_sent + self.c_bytes_recv

    @property
    def d_bytes(self) -> int:
        return self.d_bytes_sent + self.d_bytes_recv

    # ------------------------------------------------------------ ratios

    @property
    def r_sr(self) -> "Fraction | float | None":
        """Data bytes sent over data bytes received, exact.

        math.inf when the node received nothing but sent something; None
        when it moved no data at all.
        """
        if self.d_bytes_recv == 0:
            return math.inf if self.d_bytes_sent else None
        return Fraction(self.d_bytes_sent, self.d_bytes_recv)

    @property
    def r_bf(self) -> "Fraction | None":
        """Bytes per frame across everything attributed to the node."""
        frames = self.frames_total
        if frames == 0:
            return None
        return Fraction(self.bytes_total, frames)

    # ------------------------------------------------------------- admin

    def observe(self, ts_us: int, channel: int) -> None:
        self.channels.add(channel)
        if self.first_seen_us is None or ts_us < self.first_seen_us:
            self.first_seen_us = ts_us
        if self.last_seen_us is None or ts_us > self.last_seen_us:
            self.last_seen_us = ts_us

    def merge(self, other: "NodeStats") -> "NodeStats":
        if other.address != self.address:
            raise ValueError(f"merging {other.address} into {self.address}")
        for name in _COUNTERS:
            setattr(self, name, getattr(self, name) + getattr(other, name))
        self.channels |= other.channels
        for ts in (other.first_seen_us, other.last_seen_us):
            if ts is None:
                continue
            if self.first_seen_us is None or ts < self.first_seen_us:
                self.first_seen_us = ts
            if self.last_seen_us is None or ts > self.last_seen_us:
                self.last_seen_us = ts
        return self

    def to_doc(self) -> dict:
        doc = {
            "address": self.address,
            "protocol": self.protocol,
            "channels": sorted(self.channels),
            "first_seen_us": self.first_seen_us,
            "last_seen_us": self.last_seen_us,
            "frames_total": self.frames_total,
            "bytes_total": self.bytes_total,
            "r_sr": _wire_ratio(self.r_sr),
            "r_bf": _wire_ratio(self.r_bf),
        }
        for name in _COUNTERS:
            doc[name] = getattr(self, name)
        return doc


def _traffic_class(kind: str) -> str:
    try:
        return KIND_CLASS[kind]
    except KeyError:
        raise ValueError(f"frame kind {kind!r} has no traffic class") from None


def aggregate(records) -> "dict[str, NodeStats]":
    """Fold a frame stream into per-address stats.

    Works on anything with the analysis fields (FrameRecord, FrameInfo,
    or rows read back from storage).
    """
    stats: "dict[str, NodeStats]" = {}

    def node(addr: str, protocol: str) -> NodeStats:
        entry = stats.get(addr)
        if entry is None:
            entry = stats[addr] = NodeStats(address=addr, protocol=protocol)
        return entry

    for rec in records:
        cls = _traffic_class(rec.kind)
        size = rec.length_bytes
        if rec.src is not None:
            entry = node(rec.src, rec.protocol)
            setattr(entry, f"{cls}_frames_sent",
                    getattr(entry, f"{cls}_frames_sent") + 1)
            setattr(entry, f"{cls}_bytes_sent",
                    getattr(entry, f"{cls}_bytes_sent") + size)
            entry.observe(rec.timestamp_us, rec.channel)
        if rec.dst is not None and classify_address(rec.dst) == "unicast":
            entry = node(rec.dst, rec.protocol)
            setattr(entry, f"{cls}_frames_recv",
                    getattr(entry, f"{cls}_frames_recv") + 1)
            setattr(entry, f"{cls}_bytes_recv",
                    getattr(entry, f"{cls}_bytes_recv") + size)
            entry.observe(rec.timestamp_us, rec.channel)
    return stats


def merge_stats(
    a: "dict[str, NodeStats]", b: "dict[str, NodeStats]"
) -> "dict[str, NodeStats]":
    """Combine two windows' stats; aggregate(x+y) == merge of the halves."""
    out: "dict[str, NodeStats]" = {}
    for src_map in (a, b):
        for addr, entry in src_map.items():
            if addr in out:
                out[addr].merge(entry)
            else:
                copy = NodeStats(address=entry.address, protocol=entry.protocol)
                copy.merge(entry)
                out[addr] = copy
    return out


@dataclass
class NetworkGraph:
    """Who talks to whom, plus whatever names the air gave up."""

    nodes: "dict[str, NodeStats]"
    links: "set[tuple[str, str]]"
    ssids: "dict[str, set[str]]"  # advertiser address -> ssids it answered for

    def to_doc(self) -> dict:
        return {
            "nodes": [self.nodes[a].to_doc() for a in sorted(self.nodes)],
            "links": [list(pair) for pair in sorted(self.links)],
            "ssids": {a: sorted(s) for a, s in sorted(self.ssids.items())},
        }


def build_graph(records, stats: "dict[str, NodeStats] | None" = None) -> NetworkGraph:
    """Link every src/dst pair that exchanged unicast frames.

    SSIDs are credited to the address that transmitted them in beacons or
    probe responses; what a client asked for in a probe request names no
    node.
    """
    records = list(records)
    if stats is None:
        stats = aggregate(records)
    links: "set[tuple[str, str]]" = set()
    ssids: "dict[str, set[str]]" = {}
    for rec in records:
        if (
            rec.src is not None
            and rec.dst is not None
            and classify_address(rec.dst) == "unicast"
            and rec.src != rec.dst
        ):
            pair = (rec.src, rec.dst) if rec.src <= rec.dst else (rec.dst, rec.src)
            links.add(pair)
        if (
            rec.ssid is not None
            and rec.src is not None
            and rec.subtype in ("beacon", "probe_resp")
        ):
            ssids.setdefault(rec.src, set()).add(rec.ssid)
    return NetworkGraph(nodes=stats, links=links, ssids=ssids)
