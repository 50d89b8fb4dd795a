"""Per-frame field extraction and delivery to the storage service.

FrameInfo is the wire shape: every record posted to /api/frames carries all
fourteen analysis fields (absent ones as null) plus the source_id and
sequence_number the receiver uses to deduplicate. Delivery is at-least-once:
batches are retried with backoff and anything still refused is spooled to
disk as JSON lines for a later catch-up pass.
"""

import json
import time
from dataclasses import dataclass

import requests

from .capture import pcapio
from .errors import SinkUnavailable
from .frames.model import FrameRecord

WIRE_FIELDS = (
    "protocol",
    "timestamp_us",
    "channel",
    "rssi_dbm",
    "length_bytes",
    "kind",
    "subtype",
    "src",
    "dst",
    "ssid",
    "ble_addr_type",
    "ble_local_name",
    "ble_access_address",
    "pan_id",
)

MAX_BATCH = 500
RETRY_BACKOFFS_S = (0.1, 0.5, 2.5)


@dataclass
class FrameInfo:
    """The analysis fields of one frame, hex identifiers already formatted."""

    protocol: str
    timestamp_us: int
    channel: int
    rssi_dbm: "int | None"
    length_bytes: int
    kind: str
    subtype: str
    src: "str | None" = None
    dst: "str | None" = None
    ssid: "str | None" = None
    ble_addr_type: "str | None" = None
    ble_local_name: "str | None" = None
    ble_access_address: "str | None" = None
    pan_id: "str | None" = None

    def to_wire(self) -> dict:
        return {name: getattr(self, name) for name in WIRE_FIELDS}

    @classmethod
    def from_wire(cls, doc: dict) -> "FrameInfo":
        return cls(**{name: doc.get(name) for name in WIRE_FIELDS})


def extract(record: FrameRecord) -> FrameInfo:
    """Flatten a parsed frame into its wire fields."""
    return FrameInfo(
        protocol=record.protocol,
        timestamp_us=record.timestamp_us,
        channel=record.channel,
        rssi_dbm=record.rssi_dbm,
        length_bytes=record.length_bytes,
        kind=record.kind,
        subtype=record.subtype,
        src=record.src,
        dst=record.dst,
        ssid=record.ssid,
        ble_addr_type=record.ble_addr_type,
        ble_local_name=record.ble_local_name,
        ble_access_address=(
            None
            if record.ble_access_address is None
            else f"{record.ble_access_address:08x}"
        ),
        pan_id=None if record.pan_id is None else f"{record.pan_id:04x}",
    )


class HttpSink:
    """Posts frame batches to the storage service."""

    def __init__(self, base_url: str, *, timeout_s: float = 10.0, session=None):
        self.url = base_url.rstrip("/") + "/api/frames"
        self.timeout_s = timeout_s
        self.session = session or requests.Session()

    def accept(self, batch: "list[dict]") -> int:
        try:
            resp = self.session.post(self.url, json=batch, timeout=self.timeout_s)
        except requests.RequestException as exc:
            raise SinkUnavailable(str(exc)) from exc
        if resp.status_code >= 500:
            raise SinkUnavailable(f"server answered {resp.status_code}")
        if resp.status_code != 200:
            # our own batch is bad; retrying the same bytes cannot help
            raise ValueError(f"batch rejected ({resp.status_code}): {resp.text}")
        return int(resp.json().get("accepted", 0))


class StoreSink:
    """Feeds a local FrameStore directly, same contract as HttpSink."""

    def __init__(self, store):
        self.store = store

    def accept(self, batch: "list[dict]") -> int:
        return self.store.store_frames(batch)


def forward(
    batch: "list[dict]",
    sink,
    *,
    backoffs=RETRY_BACKOFFS_S,
    sleep=time.sleep,
) -> int:
    """Push one batch through a sink, retrying over transient failures.

    Gives the sink len(backoffs)+1 chances; re-raises SinkUnavailable once
    they are spent. Safe to re-run: receivers deduplicate on
    (source_id, sequence_number).
    """
    attempt = 0
    while True:
        try:
            return sink.accept(batch)
        except SinkUnavailable:
            if attempt >= len(backoffs):
                raise
            sleep(backoffs[attempt])
            attempt += 1


class DeliveryPipeline:
    """Batches extracted frames toward a sink, spooling what will not go.

    source_id plus a monotonically increasing sequence_number is stamped on
    every record so replays and retries collapse server-side.
    """

    def __init__(
        self,
        sink,
        source_id: str,
        *,
        batch_size: int = MAX_BATCH,
        overflow_path=None,
        backoffs=RETRY_BACKOFFS_S,
        sleep=time.sleep,
    ):
        if batch_size < 1 or batch_size > MAX_BATCH:
            raise ValueError(f"batch size must be 1..{MAX_BATCH}")
        self.sink = sink
        self.source_id = source_id
        self.batch_size = batch_size
        self.overflow_path = overflow_path
        self.backoffs = backoffs
        self.sleep = sleep
        self.sequence = 0
        self.delivered = 0
        self.spooled = 0
        self._pending: "list[dict]" = []

    def feed(self, info: FrameInfo) -> None:
        doc = info.to_wire()
        doc["source_id"] = self.source_id
        doc["sequence_number"] = self.sequence
        self.sequence += 1
        self._pending.append(doc)
        if len(self._pending) >= self.batch_size:
            self._send()

    def flush(self) -> None:
        if self._pending:
            self._send()

    def _send(self) -> None:
        batch, self._pending = self._pending, []
        try:
            self.delivered += forward(
                batch, self.sink, backoffs=self.backoffs, sleep=self.sleep
            )
        except SinkUnavailable:
            if self.overflow_path is None:
                raise
            with open(self.overflow_path, "a", encoding="utf-8") as fh:
                for doc in batch:
                    fh.write(json.dumps(doc, sort_keys=True) + "\n")
            self.spooled += len(batch)


def read_spool(path) -> "list[dict]":
    """Load records back out of an overflow spool file."""
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(json.loads(line))
    return out


def spool_raw(records: "list[FrameRecord]", path) -> int:
    """Keep raw frames losslessly when analysis must be deferred.

    One protocol per file; mixing would need different link types and
    raises MixedLinkTypes before anything hits disk.
    """
    return pcapio.write_capture(path, records)
