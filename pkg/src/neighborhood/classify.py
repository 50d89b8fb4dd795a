"""Role and device-type inference from traffic shape alone.

A streaming camera pushes far more data than it pulls and rides in large
frames, so two ratios are enough to call it: sent/received data bytes
(r_sr) and bytes per frame (r_bf). A node inside both bands is labeled
camera. The default band was fixed from live streams of consumer cameras;
calibrate_band refits it as sample mean +- one standard deviation when you
have your own labeled captures.

Infrastructure falls out structurally: whoever transmits beacons or probe
responses is an access point, and a busy neighbor of an access point that
moves pure data without ever sending management or control frames is the
upstream gateway, visible only through the relays carrying its address.
"""

import math
import statistics
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidConfig, KeyMismatch
from .metrics import NodeStats, aggregate, build_graph

CAMERA = "camera"
OTHERS = "others"

DEFAULT_R_SR_MIN = 4.0
DEFAULT_R_SR_MAX = 20.0
DEFAULT_R_BF_MIN = 500.0
DEFAULT_R_BF_MAX = 1500.0


@dataclass
class CameraBand:
    """Inclusive acceptance windows for the two ratios."""

    r_sr_min: float = DEFAULT_R_SR_MIN
    r_sr_max: float = DEFAULT_R_SR_MAX
    r_bf_min: float = DEFAULT_R_BF_MIN
    r_bf_max: float = DEFAULT_R_BF_MAX

    def validate(self) -> None:
        for name in ("r_sr_min", "r_sr_max", "r_bf_min", "r_bf_max"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value)):
                raise InvalidConfig(f"{name} must be a finite number, got {value!r}")
            if value < 0:
                raise InvalidConfig(f"{name} must not be negative, got {value!r}")
        if self.r_sr_min > self.r_sr_max:
            raise InvalidConfig("r_sr band is inverted")
        if self.r_bf_min > self.r_bf_max:
            raise InvalidConfig("r_bf band is inverted")

    def to_doc(self) -> dict:
        return {
            "r_sr_min": self.r_sr_min,
            "r_sr_max": self.r_sr_max,
            "r_bf_min": self.r_bf_min,
            "r_bf_max": self.r_bf_max,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "CameraBand":
        if not isinstance(doc, dict):
            raise InvalidConfig("band must be an object")
        unknown = set(doc) - {"r_sr_min", "r_sr_max", "r_bf_min", "r_bf_max"}
        if unknown:
            raise InvalidConfig(f"unknown band keys: {sorted(unknown)}")
        band = cls(**{k: doc[k] for k in doc})
        band.validate()
        return band


def classify_camera(r_sr, r_bf, band: "CameraBand | None" = None) -> str:
    """Label one node from its two ratios; missing ratios mean not-a-camera."""
    band = band or CameraBand()
    if r_sr is None or r_bf is None:
        return OTHERS
    if r_sr == math.inf:
        return OTHERS
    if band.r_sr_min <= r_sr <= band.r_sr_max and band.r_bf_min <= r_bf <= band.r_bf_max:
        return CAMERA
    return OTHERS


def classify_stats(
    stats: "dict[str, NodeStats]", band: "CameraBand | None" = None
) -> "dict[str, str]":
    return {
        addr: classify_camera(s.r_sr, s.r_bf, band) for addr, s in stats.items()
    }


# ------------------------------------------------------------ structure


def detect_access_points(records) -> "dict[str, set[str]]":
    """Addresses that transmitted beacons or probe responses, with SSIDs."""
    aps: "dict[str, set[str]]" = {}
    for rec in records:
        if rec.subtype in ("beacon", "probe_resp") and rec.src is not None:
            names = aps.setdefault(rec.src, set())
            if rec.ssid is not None:
                names.add(rec.ssid)
    return aps


def detect_gateway(
    stats: "dict[str, NodeStats]",
    aps: "dict[str, set[str]]",
    links: "set[tuple[str, str]]",
) -> "str | None":
    """Pick the upstream router out of per-node stats.

    Wanted: a non-AP neighbor of an AP that moved serious data (at or above
    the median of data movers) yet sent zero management and zero control
    frames. Ties go to whoever moved the most data.
    """
    data_volumes = [
        s.data_bytes_total for s in stats.values() if s.data_bytes_total > 0
    ]
    if not data_volumes:
        return None
    floor = statistics.median(data_volumes)

    def ap_neighbor(addr: str) -> bool:
        for a, b in links:
            if addr == a and b in aps:
                return True
            if addr == b and a in aps:
                return True
        return False

    candidates = [
        s for addr, s in stats.items()
        if addr not in aps
        and s.m_frames_sent == 0
        and s.c_frames_sent == 0
        and s.data_bytes_total >= floor
        and ap_neighbor(addr)
    ]
    if not candidates:
        return None
    return max(candidates, key=lambda s: (s.data_bytes_total, s.address)).address


# ------------------------------------------------------- BLE connections


@dataclass
class BleConnection:
    """One access address worth of data-channel activity."""

    access_address: str
    participants: "set[str]" = field(default_factory=set)
    hop_increment: "int | None" = None
    channel_map: "int | None" = None
    channels: "set[int]" = field(default_factory=set)
    data_frames: int = 0
    control_frames: int = 0
    data_bytes: int = 0
    control_bytes: int = 0
    saw_connect_req: bool = False
    first_seen_us: "int | None" = None
    last_seen_us: "int | None" = None

    def observe_ts(self, ts_us: int) -> None:
        if self.first_seen_us is None or ts_us < self.first_seen_us:
            self.first_seen_us = ts_us
        if self.last_seen_us is None or ts_us > self.last_seen_us:
            self.last_seen_us = ts_us

    def mapped_channels(self) -> "list[int] | None":
        if self.channel_map is None:
            return None
        return [k for k in range(37) if self.channel_map >> k & 1]

    def to_doc(self) -> dict:
        return {
            "access_address": self.access_address,
            "participants": sorted(self.participants),
            "hop_increment": self.hop_increment,
            "channel_map": self.channel_map,
            "mapped_channels": self.mapped_channels(),
            "channels_seen": sorted(self.channels),
            "data_frames": self.data_frames,
            "control_frames": self.control_frames,
            "data_bytes": self.data_bytes,
            "control_bytes": self.control_bytes,
            "saw_connect_req": self.saw_connect_req,
            "first_seen_us": self.first_seen_us,
            "last_seen_us": self.last_seen_us,
        }


def _aa_key(value) -> str:
    return f"{value:08x}" if isinstance(value, int) else value


def track_ble_connections(records) -> "list[BleConnection]":
    """Group BLE data-channel traffic by access address.

    CONNECT_REQ frames seed a connection with its negotiated parameters and
    the two endpoint addresses; connections observed mid-flight (no
    CONNECT_REQ in the window) still accumulate frames, channels and byte
    counts, which is how an established-elsewhere pairing shows up.
    """
    conns: "dict[str, BleConnection]" = {}

    def conn(aa) -> BleConnection:
        key = _aa_key(aa)
        entry = conns.get(key)
        if entry is None:
            entry = conns[key] = BleConnection(access_address=key)
        return entry

    for rec in records:
        if rec.protocol != "ble":
            continue
        if rec.subtype == "connect_req" and rec.ble_access_address is not None:
            entry = conn(rec.ble_access_address)
            entry.saw_connect_req = True
            entry.observe_ts(rec.timestamp_us)
            for addr in (rec.src, rec.dst):
                if addr:
                    entry.participants.add(addr)
            params = getattr(rec, "connection_params", None)
            if params is not None:
                entry.hop_increment = params.hop_increment
                entry.channel_map = params.channel_map
        elif rec.kind in ("data", "data_control") and rec.ble_access_address is not None:
            entry = conn(rec.ble_access_address)
            entry.observe_ts(rec.timestamp_us)
            entry.channels.add(rec.channel)
            if rec.kind == "data":
                entry.data_frames += 1
                entry.data_bytes += rec.length_bytes
            else:
                entry.control_frames += 1
                entry.control_bytes += rec.length_bytes

    return sorted(conns.values(), key=lambda c: c.access_address)


# ------------------------------------------------------------ scoring


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fn: int
    fp: int
    tn: int

    @property
    def far(self) -> "Fraction | None":
        """False accepts over all true negatives."""
        if self.fp + self.tn == 0:
            return None
        return Fraction(self.fp, self.fp + self.tn)

    @property
    def frr(self) -> "Fraction | None":
        """False rejects over all true positives."""
        if self.fn + self.tp == 0:
            return None
        return Fraction(self.fn, self.fn + self.tp)

    @property
    def far_percent(self) -> "float | None":
        return None if self.far is None else round(float(self.far * 100), 2)

    @property
    def frr_percent(self) -> "float | None":
        return None if self.frr is None else round(float(self.frr * 100), 2)

    def to_doc(self) -> dict:
        return {
            "tp": self.tp,
            "fn": self.fn,
            "fp": self.fp,
            "tn": self.tn,
            "far_percent": self.far_percent,
            "frr_percent": self.frr_percent,
        }


def evaluate(predictions: "dict[str, str]", truth: "dict[str, str]") -> ConfusionMatrix:
    """Score camera predictions against labels; keys must match exactly."""
    missing = sorted(set(truth) - set(predictions))
    extra = sorted(set(predictions) - set(truth))
    if missing or extra:
        raise KeyMismatch(
            f"prediction keys disagree with truth (missing {missing}, extra {extra})"
        )
    tp = fn = fp = tn = 0
    for addr, actual in truth.items():
        predicted = predictions[addr]
        if actual == CAMERA:
            if predicted == CAMERA:
                tp += 1
            else:
                fn += 1
        else:
            if predicted == CAMERA:
                fp += 1
            else:
                tn += 1
    return ConfusionMatrix(tp=tp, fn=fn, fp=fp, tn=tn)


def calibrate_band(samples: "list[tuple[float, float]]") -> CameraBand:
    """Fit the band to labeled camera measurements: mean +- one stdev.

    samples holds (r_sr, r_bf) pairs from known cameras; two or more are
    needed for a standard deviation to exist.
    """
    if len(samples) < 2:
        raise InvalidConfig("band calibration needs at least two camera samples")
    r_srs = [float(a) for a, _ in samples]
    r_bfs = [float(b) for _, b in samples]
    sr_mean, sr_sd = statistics.mean(r_srs), statistics.stdev(r_srs)
    bf_mean, bf_sd = statistics.mean(r_bfs), statistics.stdev(r_bfs)
    band = CameraBand(
        r_sr_min=max(sr_mean - sr_sd, 0.0),
        r_sr_max=sr_mean + sr_sd,
        r_bf_min=max(bf_mean - bf_sd, 0.0),
        r_bf_max=bf_mean + bf_sd,
    )
    band.validate()
    return band


# ---------------------------------------------------------- whole window


def classify_window(records, *, band: "CameraBand | None" = None) -> dict:
    """Run the whole chain over one window and emit a result document."""
    records = list(records)
    band = band or CameraBand()
    stats = aggregate(records)
    graph = build_graph(records, stats)
    aps = detect_access_points(records)
    gateway = detect_gateway(stats, aps, graph.links)
    labels = classify_stats(stats, band)
    connections = track_ble_connections(records)

    roles = {}
    for addr in stats:
        if addr in aps:
            roles[addr] = "access_point"
        elif addr == gateway:
            roles[addr] = "gateway"
        elif labels.get(addr) == CAMERA:
            roles[addr] = "camera"

    nodes = []
    for addr in sorted(stats):
        doc = stats[addr].to_doc()
        doc["label"] = labels[addr]
        doc["role"] = roles.get(addr)
        nodes.append(doc)

    timestamps = [rec.timestamp_us for rec in records]
    return {
        "window": {
            "from_us": min(timestamps) if timestamps else None,
            "to_us": max(timestamps) if timestamps else None,
            "frames": len(records),
        },
        "band": band.to_doc(),
        "nodes": nodes,
        "links": [list(pair) for pair in sorted(graph.links)],
        "ssids": {a: sorted(s) for a, s in sorted(graph.ssids.items())},
        "access_points": sorted(aps),
        "gateway": gateway,
        "cameras": sorted(a for a, l in labels.items() if l == CAMERA),
        "ble_connections": [c.to_doc() for c in connections],
    }
