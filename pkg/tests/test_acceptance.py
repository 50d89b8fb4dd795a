"""Acceptance gate: the eight properties the pipeline must hold, each with a
runtime budget. Every criterion prints one PASS/FAIL line so a full run reads
as a checklist."""

import random
import statistics
import struct
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from neighborhood import analyzer
from neighborhood.capture import pcapio
from neighborhood.capture.replay import ReplayStats, replay_capture
from neighborhood.capture.scenario import ScenarioSpec, generate_scenario
from neighborhood.capture.schedule import ScanConfig, build_hop_schedule, sweep_time_s
from neighborhood.classify import (
    CAMERA,
    OTHERS,
    ConfusionMatrix,
    classify_stats,
    evaluate,
    track_ble_connections,
)
from neighborhood.errors import FrameParseError
from neighborhood.frames import ble, build, wifi, zigbee
from neighborhood.frames.address import classify_address
from neighborhood.frames.model import CaptureMeta
from neighborhood.metrics import KIND_CLASS, aggregate, build_graph
from neighborhood.storage.db import FrameStore


@contextmanager
def criterion(capsys, name: str, budget_s: float):
    t0 = time.perf_counter()
    try:
        yield
    except BaseException:
        elapsed = time.perf_counter() - t0
        with capsys.disabled():
            print(f"ACCEPTANCE {name}: FAIL ({elapsed:.2f}s)")
        raise
    elapsed = time.perf_counter() - t0
    on_time = elapsed < budget_s
    verdict = "PASS" if on_time else "FAIL over budget"
    with capsys.disabled():
        print(f"ACCEPTANCE {name}: {verdict} "
              f"({elapsed:.2f}s of {budget_s:g}s budget)")
    assert on_time, f"{name} took {elapsed:.2f}s, budget {budget_s:g}s"


# ---------------------------------------------------------------------- 1


def test_confusion_matrix_reproduction(capsys):
    """tp=10 fn=2 fp=3 tn=80 must score FAR 3.61% / FRR 16.67%."""
    with criterion(capsys, "1 confusion-matrix rates", 1.0):
        cm = ConfusionMatrix(tp=10, fn=2, fp=3, tn=80)
        assert cm.far == Fraction(3, 83)
        assert cm.frr == Fraction(2, 12)
        assert cm.far_percent == 3.61
        assert cm.frr_percent == 16.67

        # same numbers out of evaluate() on a full label set
        truth, preds = {}, {}
        cells = [(CAMERA, CAMERA, 10), (CAMERA, OTHERS, 2),
                 (OTHERS, CAMERA, 3), (OTHERS, OTHERS, 80)]
        i = 0
        for actual, predicted, count in cells:
            for _ in range(count):
                key = f"02:00:00:00:{i // 256:02x}:{i % 256:02x}"
                truth[key] = actual
                preds[key] = predicted
                i += 1
        scored = evaluate(preds, truth)
        assert (scored.tp, scored.fn, scored.fp, scored.tn) == (10, 2, 3, 80)
        assert scored.far_percent == 3.61
        assert scored.frr_percent == 16.67


# ---------------------------------------------------------------------- 2


def test_schedule_arithmetic(capsys):
    """Sweep time is dwell x hops; segments tile without gap or overlap."""
    with criterion(capsys, "2 hop-schedule arithmetic", 5.0):
        fast = ScanConfig.wifi_default()
        fast.dwell_s = 5.0
        assert sweep_time_s(fast) == 65.0
        assert build_hop_schedule(fast).total_duration_s == 65.0
        assert sweep_time_s(ScanConfig.wifi_default()) == 390.0

        rng = random.Random(2024)
        for _ in range(300):
            dwell = rng.uniform(0.1, 90.0)
            hops = rng.randrange(1, 40)
            n_channels = rng.randrange(1, 14)
            cfg = ScanConfig("wifi", channels=list(range(1, 1 + n_channels)),
                             dwell_s=dwell, hops=hops)
            sched = build_hop_schedule(cfg)
            assert len(sched.segments) == hops
            assert sched.total_duration_s == pytest.approx(dwell * hops)
            assert sched.segments[0].start_s == 0.0
            for a, b in zip(sched.segments, sched.segments[1:]):
                assert b.start_s == pytest.approx(a.end_s)  # contiguous
                assert b.end_s > b.start_s                  # non-degenerate
            assert sweep_time_s(cfg) == pytest.approx(dwell * n_channels)


# ---------------------------------------------------------------------- 3


def test_high_load_end_to_end(capsys, tmp_path, high_load):
    """Ingest, aggregate and classify a seeded busy network; labels must hit
    exactly the streaming cameras, the AP must relay symmetrically and the
    gateway must show zero management/control frames."""
    with criterion(capsys, "3 high-load end-to-end", 30.0):
        records, truth = high_load
        assert len(truth.names) >= 7
        assert len(truth.cameras()) == 3

        with FrameStore(tmp_path / "accept3.db") as store:
            pipe = analyzer.DeliveryPipeline(analyzer.StoreSink(store), "accept-3")
            for rec in records:
                pipe.feed(analyzer.extract(rec))
            pipe.flush()
            assert pipe.delivered == len(records)

            stats = store.node_stats()
            _, doc = store.classify_window()

        # exact camera hit: 0 false positives, 0 false negatives
        labels = {a: CAMERA if a in truth.cameras() else OTHERS for a in stats}
        cm = evaluate(classify_stats(stats), labels)
        assert cm.tp == 3, f"expected all 3 cameras, got {cm.tp}"
        assert cm.fn == 0, f"{cm.fn} cameras missed"
        assert cm.fp == 0, f"{cm.fp} non-cameras labeled camera"
        assert set(doc["cameras"]) == truth.cameras()

        [ap_addr] = [a for a, r in truth.roles.items() if r == "access_point"]
        ap_r_sr = stats[ap_addr].r_sr
        assert 0.8 <= ap_r_sr <= 1.2, f"AP r_sr {float(ap_r_sr):.3f}"

        [gw_addr] = [a for a, r in truth.roles.items() if r == "gateway"]
        gw = stats[gw_addr]
        assert gw.m_frames_sent + gw.m_frames_recv == 0
        assert gw.c_frames_sent + gw.c_frames_recv == 0
        assert doc["gateway"] == gw_addr
        assert ap_addr in doc["access_points"]


# ---------------------------------------------------------------------- 4


def test_hop_filter_observation_model(capsys, tmp_path):
    """A one-channel schedule over a two-channel trace keeps exactly the
    frames a brute-force predicate says were audible."""
    with criterion(capsys, "4 hop-filter observation model", 5.0):
        rng = random.Random(41)
        records = []
        for i in range(400):
            raw = build.wifi_data("02:aa:bb:cc:dd:ee", "0a:11:22:33:44:55",
                                  length=100, seq=i)
            ts = rng.randrange(0, 12_000_000)
            records.append(wifi.parse(raw, CaptureMeta(ts, rng.choice([1, 6]), -50)))
        records.sort(key=lambda r: r.timestamp_us)
        path = tmp_path / "two_channel.pcap"
        pcapio.write_capture(path, records)

        # radio parked on channel 6 for two 3s segments: audible [0, 6) only
        sched = build_hop_schedule(
            ScanConfig("wifi", channels=[6], dwell_s=3.0, hops=2))

        t0 = records[0].timestamp_us
        audible = [r for r in records
                   if r.channel == 6 and 0 <= (r.timestamp_us - t0) / 1e6 < 6.0]

        stats = ReplayStats()
        got = list(replay_capture(path, schedule=sched, stats=stats))
        assert got == audible
        assert stats.filtered_out == len(records) - len(audible)
        assert 0 < len(audible) < len(records)  # the effect is visible


# ---------------------------------------------------------------------- 5


def _fuzz_one(parse, raw, meta):
    try:
        parse(raw, meta)
    except FrameParseError:
        pass  # the contract: typed rejection, never a crash


def test_parser_golden_corpus_and_fuzz(capsys, golden_corpus):
    """Frozen corpus matches byte-for-byte; 100k+ fuzz inputs per protocol
    produce typed errors only."""
    with criterion(capsys, "5 parser corpus + fuzz", 120.0):
        parsers = {"wifi": wifi.parse, "ble": ble.parse, "zigbee": zigbee.parse}
        for proto, entries in golden_corpus.items():
            assert len(entries) >= 30
            parse = parsers[proto]
            for entry in entries:
                raw = bytes.fromhex(entry["raw_hex"])
                meta = CaptureMeta(1_000_000, entry["channel"], -60)
                if "error" in entry:
                    with pytest.raises(FrameParseError):
                        parse(raw, meta)
                    continue
                wire = analyzer.extract(parse(raw, meta)).to_wire()
                for field, value in entry["expect"].items():
                    assert wire[field] == value, f"{proto}/{entry['name']}/{field}"

        rng = random.Random(0xF022)
        channels = {"wifi": range(1, 14), "ble": range(0, 40),
                    "zigbee": range(11, 27)}
        seeds = {
            "wifi": [build.wifi_beacon("0a:11:22:33:44:55", "net", seq=7),
                     build.wifi_data("02:aa:bb:cc:dd:ee", "0a:11:22:33:44:55",
                                     length=200)],
            "ble": [build.ble_adv_ind("c4:00:11:22:33:9f", name="tag"),
                    build.ble_data(0xDEADBEEF, payload=40)],
            "zigbee": [build.zigbee_data(0x1A62, "00:01", "00:00", seq=5,
                                         length=60)],
        }
        for proto, parse in parsers.items():
            chs = list(channels[proto])
            # unstructured: arbitrary bytes at every short length
            for _ in range(60_000):
                raw = rng.randbytes(rng.randrange(0, 64))
                _fuzz_one(parse, raw, CaptureMeta(0, rng.choice(chs), -60))
            # structured: valid frames with flipped bytes and random cuts
            for _ in range(40_000):
                raw = bytearray(rng.choice(seeds[proto]))
                for _ in range(rng.randrange(1, 4)):
                    raw[rng.randrange(len(raw))] = rng.randrange(256)
                if rng.random() < 0.5:
                    raw = raw[:rng.randrange(len(raw) + 1)]
                _fuzz_one(parse, bytes(raw), CaptureMeta(0, rng.choice(chs), -60))


# ---------------------------------------------------------------------- 6


def test_aggregation_brute_force_oracle(capsys):
    """NodeStats and link counts equal an independent recount; every node's
    bytes partition exactly into management + control + data."""
    with criterion(capsys, "6 aggregation oracle", 10.0):
        class Stub:
            def __init__(self, kind, src, dst, length, ts, ch):
                self.kind = self.subtype = kind
                self.src, self.dst = src, dst
                self.length_bytes = length
                self.timestamp_us = ts
                self.channel = ch
                self.protocol = "wifi"
                self.ssid = None

        for seed in (11, 12, 13, 14, 15):
            rng = random.Random(seed)
            addrs = [f"02:00:00:00:01:{i:02x}" for i in range(8)]
            rows = [Stub(rng.choice(list(KIND_CLASS)),
                         rng.choice(addrs + [None]),
                         rng.choice(addrs + [None, "ff:ff:ff:ff:ff:ff"]),
                         rng.randrange(10, 1500), i, rng.choice([1, 6, 11]))
                    for i in range(rng.randrange(200, 1001))]

            sent = {}
            recv = {}
            links = set()
            for r in rows:
                cls = KIND_CLASS[r.kind]
                if r.src is not None:
                    bucket = sent.setdefault(r.src, {})
                    f, b = bucket.get(cls, (0, 0))
                    bucket[cls] = (f + 1, b + r.length_bytes)
                unicast_dst = (r.dst is not None
                               and classify_address(r.dst) == "unicast")
                if unicast_dst:
                    bucket = recv.setdefault(r.dst, {})
                    f, b = bucket.get(cls, (0, 0))
                    bucket[cls] = (f + 1, b + r.length_bytes)
                if r.src is not None and unicast_dst and r.src != r.dst:
                    links.add(tuple(sorted((r.src, r.dst))))

            stats = aggregate(rows)
            graph = build_graph(rows, stats)
            assert set(stats) == set(sent) | set(recv)
            assert graph.links == links
            for addr, entry in stats.items():
                for cls in "mcd":
                    f, b = sent.get(addr, {}).get(cls, (0, 0))
                    assert getattr(entry, f"{cls}_frames_sent") == f
                    assert getattr(entry, f"{cls}_bytes_sent") == b
                    f, b = recv.get(addr, {}).get(cls, (0, 0))
                    assert getattr(entry, f"{cls}_frames_recv") == f
                    assert getattr(entry, f"{cls}_bytes_recv") == b
                assert entry.bytes_total == entry.m_bytes + entry.c_bytes + entry.d_bytes


# ---------------------------------------------------------------------- 7


def test_storage_semantics_and_throughput(capsys, tmp_path):
    """Re-POST adds nothing; windowed queries equal a linear scan over 10k
    rows; ingest sustains at least 5000 records/s."""
    with criterion(capsys, "7 storage idempotency + query oracle + rate", 60.0):
        rng = random.Random(7007)
        docs = []
        for i in range(10_000):
            docs.append({
                "source_id": f"scanner-{i % 3}",
                "sequence_number": i,
                "protocol": rng.choice(["wifi", "ble", "zigbee"]),
                "timestamp_us": rng.randrange(0, 60_000_000),
                "channel": rng.choice([1, 6, 11, 15, 37]),
                "rssi_dbm": -rng.randrange(30, 90),
                "length_bytes": rng.randrange(10, 1500),
                "kind": "data",
                "subtype": "data",
                "src": f"02:00:00:00:02:{rng.randrange(16):02x}",
                "dst": f"02:00:00:00:02:{rng.randrange(16):02x}",
                "ssid": None,
                "ble_addr_type": None,
                "ble_local_name": None,
                "ble_access_address": None,
                "pan_id": None,
            })

        with FrameStore(tmp_path / "accept7.db") as store:
            t0 = time.perf_counter()
            accepted = 0
            for i in range(0, len(docs), 500):
                accepted += store.store_frames(docs[i:i + 500])
            ingest_s = time.perf_counter() - t0
            assert accepted == 10_000
            rate = 10_000 / ingest_s
            assert rate >= 5000, f"ingest ran at {rate:.0f} records/s"

            # full re-POST: every row is a duplicate, count unchanged
            readds = sum(store.store_frames(docs[i:i + 500])
                         for i in range(0, len(docs), 500))
            assert readds == 0
            assert store.count_frames() == 10_000

            for lo, hi, proto in [(0, 60_000_000, None),
                                  (10_000_000, 20_000_000, None),
                                  (5_000_000, 45_000_000, "zigbee"),
                                  (59_999_999, 60_000_000, "wifi")]:
                got = store.query_frames(from_us=lo, to_us=hi, protocol=proto)
                want = [d for d in docs
                        if lo <= d["timestamp_us"] < hi
                        and (proto is None or d["protocol"] == proto)]
                want.sort(key=lambda d: d["timestamp_us"])
                assert [r["timestamp_us"] for r in got] == \
                       [d["timestamp_us"] for d in want]
                got_ids = {(r["source_id"], r["sequence_number"]) for r in got}
                want_ids = {(d["source_id"], d["sequence_number"]) for d in want}
                assert got_ids == want_ids

        with capsys.disabled():
            print(f"          (ingest rate {rate:,.0f} records/s)")


# ---------------------------------------------------------------------- 8


def test_ble_connection_tracking(capsys, ble_pair):
    """Lock sessions: fresh access address each time, CONNECT_REQ seen, four
    mapped data channels. Tracker: one stable access address, no CONNECT_REQ,
    the full data-channel set in use."""
    with criterion(capsys, "8 BLE connection tracking", 10.0):
        records, truth = ble_pair
        conns = {c.access_address: c for c in track_ble_connections(records)}
        assert set(conns) == set(truth.ble_sessions)

        lock_aas = [aa for aa, n in truth.ble_sessions.items() if n == "door-lock"]
        tracker_aas = [aa for aa, n in truth.ble_sessions.items()
                       if n == "wristband"]
        assert len(lock_aas) >= 2   # a fresh address per session
        assert len(tracker_aas) == 1

        lock_participants = set()
        for aa in lock_aas:
            conn = conns[aa]
            assert conn.saw_connect_req
            assert len(conn.participants) == 2
            assert conn.hop_increment is not None
            mapped = set(conn.mapped_channels())
            assert len(mapped) == 4
            assert conn.channels == mapped  # hops visit every mapped channel
            assert conn.data_frames > 0
            lock_participants.add(frozenset(conn.participants))
        # every session is the same two endpoints re-pairing
        assert len(lock_participants) == 1

        tracker = conns[tracker_aas[0]]
        assert not tracker.saw_connect_req
        assert tracker.mapped_channels() is None
        assert tracker.participants == set()
        assert tracker.channels == set(range(37))  # rides the whole data band
        assert tracker.data_frames > 0
        assert tracker.control_frames > 0
