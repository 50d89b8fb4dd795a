"""SQLite-backed frame store.

One writer lock serializes all mutation; readers go through the same
connection. Idempotency is structural: (source_id, sequence_number) is
UNIQUE and ingest uses INSERT OR IGNORE, so a retried batch adds nothing
and reports how much of it was new.

Batches are checked completely before anything is written; a bad record
rejects the whole batch with its index, which keeps a half-inserted batch
from ever existing.
"""

import json
import sqlite3
import threading
import time

from .. import classify, metrics
from ..analyzer import WIRE_FIELDS, FrameInfo

MAX_BATCH = 500

_SCHEMA = """
CREATE TABLE IF NOT EXISTS frames (
    id INTEGER PRIMARY KEY,
    source_id TEXT NOT NULL,
    sequence_number INTEGER NOT NULL,
    protocol TEXT NOT NULL,
    timestamp_us INTEGER NOT NULL,
    channel INTEGER NOT NULL,
    rssi_dbm INTEGER,
    length_bytes INTEGER NOT NULL,
    kind TEXT NOT NULL,
    subtype TEXT NOT NULL,
    src TEXT,
    dst TEXT,
    ssid TEXT,
    ble_addr_type TEXT,
    ble_local_name TEXT,
    ble_access_address TEXT,
    pan_id TEXT,
    UNIQUE (source_id, sequence_number)
);
CREATE INDEX IF NOT EXISTS frames_by_time ON frames (timestamp_us);
CREATE TABLE IF NOT EXISTS results (
    id INTEGER PRIMARY KEY,
    kind TEXT NOT NULL,
    created_us INTEGER NOT NULL,
    body TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS config (
    key TEXT PRIMARY KEY,
    value TEXT NOT NULL
);
"""

_PROTOCOLS = ("wifi", "ble", "zigbee")
_ADDR_TYPES = ("public", "random")

_INSERT = (
    "INSERT OR IGNORE INTO frames (source_id, sequence_number, "
    + ", ".join(WIRE_FIELDS)
    + ") VALUES (" + ", ".join("?" * (2 + len(WIRE_FIELDS))) + ")"
)


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _check_optional_str(doc, key, problems):
    value = doc.get(key)
    if value is not None and not isinstance(value, str):
        problems.append(f"{key} must be a string or null")


def validate_wire_record(doc, index: int) -> None:
    """Reject anything /api/frames should not swallow; index names the offender."""
    problems = []
    if not isinstance(doc, dict):
        raise ValueError(f"record {index}: not an object")
    if not isinstance(doc.get("source_id"), str) or not doc.get("source_id"):
        problems.append("source_id must be a non-empty string")
    if not _is_int(doc.get("sequence_number")) or doc.get("sequence_number", -1) < 0:
        problems.append("sequence_number must be a non-negative integer")
    if doc.get("protocol") not in _PROTOCOLS:
        problems.append(f"protocol must be one of {list(_PROTOCOLS)}")
    if not _is_int(doc.get("timestamp_us")) or doc.get("timestamp_us", -1) < 0:
        problems.append("timestamp_us must be a non-negative integer")
    if not _is_int(doc.get("channel")) or doc.get("channel", -1) < 0:
        problems.append("channel must be a non-negative integer")
    rssi = doc.get("rssi_dbm")
    if rssi is not None and not _is_int(rssi):
        problems.append("rssi_dbm must be an integer or null")
    if not _is_int(doc.get("length_bytes")) or doc.get("length_bytes", 0) < 1:
        problems.append("length_bytes must be a positive integer")
    for key in ("kind", "subtype"):
        if not isinstance(doc.get(key), str) or not doc.get(key):
            problems.append(f"{key} must be a non-empty string")
    for key in ("src", "dst", "ssid", "ble_local_name"):
        _check_optional_str(doc, key, problems)
    addr_type = doc.get("ble_addr_type")
    if addr_type is not None and addr_type not in _ADDR_TYPES:
        problems.append(f"ble_addr_type must be one of {list(_ADDR_TYPES)} or null")
    aa = doc.get("ble_access_address")
    if aa is not None and not (
        isinstance(aa, str) and len(aa) == 8 and all(c in "0123456789abcdef" for c in aa)
    ):
        problems.append("ble_access_address must be 8 lowercase hex chars or null")
    pan = doc.get("pan_id")
    if pan is not None and not (
        isinstance(pan, str) and len(pan) == 4 and all(c in "0123456789abcdef" for c in pan)
    ):
        problems.append("pan_id must be 4 lowercase hex chars or null")
    if problems:
        raise ValueError(f"record {index}: " + "; ".join(problems))


class FrameStore:
    def __init__(self, path):
        self.path = path
        self._lock = threading.Lock()
        self._conn = sqlite3.connect(path, check_same_thread=False)
        self._conn.row_factory = sqlite3.Row
        with self._lock:
            self._conn.execute("PRAGMA journal_mode=WAL")
            self._conn.executescript(_SCHEMA)
            self._conn.commit()

    def close(self) -> None:
        self._conn.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    # ------------------------------------------------------------ ingest

    def store_frames(self, batch) -> int:
        """Validate then insert a batch; returns how many rows were new."""
        if not isinstance(batch, list):
            raise ValueError("batch must be an array of records")
        if len(batch) > MAX_BATCH:
            raise ValueError(f"batch of {len(batch)} exceeds the {MAX_BATCH} limit")
        for i, doc in enumerate(batch):
            validate_wire_record(doc, i)
        rows = [
            tuple([doc["source_id"], doc["sequence_number"]]
                  + [doc.get(k) for k in WIRE_FIELDS])
            for doc in batch
        ]
        with self._lock:
            before = self._conn.total_changes
            self._conn.executemany(_INSERT, rows)
            self._conn.commit()
            return self._conn.total_changes - before

    # ------------------------------------------------------------- reads

    def count_frames(self) -> int:
        with self._lock:
            row = self._conn.execute("SELECT COUNT(*) AS n FROM frames").fetchone()
            return row["n"]

    def query_frames(
        self,
        *,
        from_us: "int | None" = None,
        to_us: "int | None" = None,
        protocol: "str | None" = None,
        src: "str | None" = None,
        dst: "str | None" = None,
        limit: "int | None" = None,
        offset: int = 0,
    ) -> "list[dict]":
        """Rows in [from_us, to_us), oldest first, ingest order breaking ties."""
        where = []
        args: list = []
        if from_us is not None:
            where.append("timestamp_us >= ?")
            args.append(from_us)
        if to_us is not None:
            where.append("timestamp_us < ?")
            args.append(to_us)
        if protocol is not None:
            where.append("protocol = ?")
            args.append(protocol)
        if src is not None:
            where.append("src = ?")
            args.append(src)
        if dst is not None:
            where.append("dst = ?")
            args.append(dst)
        sql = "SELECT * FROM frames"
        if where:
            sql += " WHERE " + " AND ".join(where)
        sql += " ORDER BY timestamp_us, id"
        if limit is not None:
            sql += " LIMIT ? OFFSET ?"
            args += [limit, offset]
        elif offset:
            sql += " LIMIT -1 OFFSET ?"
            args.append(offset)
        with self._lock:
            rows = self._conn.execute(sql, args).fetchall()
        return [dict(row) for row in rows]

    def frames_as_infos(self, **kwargs) -> "list[FrameInfo]":
        return [FrameInfo.from_wire(row) for row in self.query_frames(**kwargs)]

    # ---------------------------------------------------------- analysis

    def node_stats(self, *, from_us=None, to_us=None) -> "dict[str, metrics.NodeStats]":
        return metrics.aggregate(self.frames_as_infos(from_us=from_us, to_us=to_us))

    def graph(self, *, from_us=None, to_us=None) -> dict:
        infos = self.frames_as_infos(from_us=from_us, to_us=to_us)
        return metrics.build_graph(infos).to_doc()

    def classify_window(self, *, from_us=None, to_us=None, band=None) -> "tuple[int, dict]":
        infos = self.frames_as_infos(from_us=from_us, to_us=to_us)
        band = band if band is not None else self.camera_band()
        doc = classify.classify_window(infos, band=band)
        result_id = self.save_result("classification", doc)
        return result_id, doc

    # ----------------------------------------------------------- results

    def save_result(self, kind: str, body: dict) -> int:
        created_us = int(time.time() * 1e6)
        with self._lock:
            cur = self._conn.execute(
                "INSERT INTO results (kind, created_us, body) VALUES (?, ?, ?)",
                (kind, created_us, json.dumps(body, sort_keys=True)),
            )
            self._conn.commit()
            return cur.lastrowid

    def get_result(self, result_id: int) -> "dict | None":
        with self._lock:
            row = self._conn.execute(
                "SELECT * FROM results WHERE id = ?", (result_id,)
            ).fetchone()
        if row is None:
            return None
        return {
            "id": row["id"],
            "kind": row["kind"],
            "created_us": row["created_us"],
            "body": json.loads(row["body"]),
        }

    def list_results(self, kind: "str | None" = None) -> "list[dict]":
        sql = "SELECT id, kind, created_us FROM results"
        args: tuple = ()
        if kind is not None:
            sql += " WHERE kind = ?"
            args = (kind,)
        sql += " ORDER BY id DESC"
        with self._lock:
            rows = self._conn.execute(sql, args).fetchall()
        return [dict(row) for row in rows]

    # ------------------------------------------------------------ config

    def get_config(self) -> dict:
        with self._lock:
            rows = self._conn.execute("SELECT key, value FROM config").fetchall()
        stored = {row["key"]: json.loads(row["value"]) for row in rows}
        doc = {
            "band": classify.CameraBand().to_doc(),
            "scan": None,
        }
        doc.update(stored)
        return doc

    def put_config(self, doc: dict) -> dict:
        """Validate and persist; only known sections are accepted."""
        from ..capture.schedule import ScanConfig

        if not isinstance(doc, dict):
            raise ValueError("config must be an object")
        unknown = set(doc) - {"band", "scan"}
        if unknown:
            raise ValueError(f"unknown config sections: {sorted(unknown)}")
        if "band" in doc:
            classify.CameraBand.from_doc(doc["band"])
        if "scan" in doc and doc["scan"] is not None:
            ScanConfig.from_doc(doc["scan"])
        with self._lock:
            for key, value in doc.items():
                self._conn.execute(
                    "INSERT INTO config (key, value) VALUES (?, ?) "
                    "ON CONFLICT(key) DO UPDATE SET value = excluded.value",
                    (key, json.dumps(value, sort_keys=True)),
                )
            self._conn.commit()
        return self.get_config()

    def camera_band(self) -> "classify.CameraBand":
        return classify.CameraBand.from_doc(self.get_config()["band"])
