"""Device labeling: band edges, structural detection, scoring, calibration."""

import math
from fractions import Fraction

import pytest

from neighborhood.classify import (
    CAMERA,
    OTHERS,
    BleConnection,
    CameraBand,
    ConfusionMatrix,
    calibrate_band,
    classify_camera,
    classify_window,
    detect_access_points,
    detect_gateway,
    evaluate,
    track_ble_connections,
)
from neighborhood.errors import InvalidConfig, KeyMismatch
from neighborhood.metrics import NodeStats


def test_band_edges_are_inclusive():
    assert classify_camera(4.0, 1000) == CAMERA
    assert classify_camera(20.0, 1000) == CAMERA
    assert classify_camera(10.0, 500.0) == CAMERA
    assert classify_camera(10.0, 1500.0) == CAMERA
    # just outside on each edge
    assert classify_camera(3.999, 1000) == OTHERS
    assert classify_camera(20.001, 1000) == OTHERS
    assert classify_camera(10.0, 499.9) == OTHERS
    assert classify_camera(10.0, 1500.1) == OTHERS


def test_exact_fractions_compare_cleanly_at_edges():
    assert classify_camera(Fraction(4), Fraction(500)) == CAMERA
    assert classify_camera(Fraction(20), Fraction(1500)) == CAMERA
    assert classify_camera(Fraction(13), Fraction(965)) == CAMERA
    assert classify_camera(Fraction(39999, 10000), Fraction(1000)) == OTHERS


def test_degenerate_ratios_are_never_cameras():
    assert classify_camera(None, 1000) == OTHERS
    assert classify_camera(10.0, None) == OTHERS
    assert classify_camera(math.inf, 1000) == OTHERS


def test_band_validation():
    CameraBand().validate()
    with pytest.raises(InvalidConfig):
        CameraBand(r_sr_min=10, r_sr_max=5).validate()
    with pytest.raises(InvalidConfig):
        CameraBand(r_bf_min=-1).validate()
    with pytest.raises(InvalidConfig):
        CameraBand(r_sr_min=math.nan).validate()
    with pytest.raises(InvalidConfig):
        CameraBand.from_doc({"r_sr_min": 1, "bogus": 2})
    band = CameraBand.from_doc({"r_sr_min": 2.0, "r_bf_max": 2000.0})
    assert (band.r_sr_min, band.r_sr_max) == (2.0, 20.0)
    assert CameraBand.from_doc(band.to_doc()) == band


# -------------------------------------------------------------- structure


class Row:
    def __init__(self, subtype, src, ssid=None):
        self.subtype = subtype
        self.src = src
        self.ssid = ssid


def test_detect_access_points_collects_ssids():
    rows = [
        Row("beacon", "0a:00:00:00:00:01", "den"),
        Row("probe_resp", "0a:00:00:00:00:01", "den"),
        Row("beacon", "0a:00:00:00:00:02", None),   # hidden network AP
        Row("probe_req", "02:00:00:00:00:03", "den"),
        Row("data", "02:00:00:00:00:04"),
    ]
    aps = detect_access_points(rows)
    assert aps == {"0a:00:00:00:00:01": {"den"}, "0a:00:00:00:00:02": set()}


def _node(addr, *, d_sent=0, d_recv=0, m_sent=0, c_sent=0):
    s = NodeStats(addr, "wifi")
    s.d_bytes_sent = d_sent
    s.d_frames_sent = 1 if d_sent else 0
    s.d_bytes_recv = d_recv
    s.d_frames_recv = 1 if d_recv else 0
    s.m_frames_sent = m_sent
    s.m_bytes_sent = m_sent * 80
    s.c_frames_sent = c_sent
    s.c_bytes_sent = c_sent * 16
    return s


def test_detect_gateway_picks_silent_heavy_ap_neighbor():
    ap = "0a:00:00:00:00:01"
    gw = "9c:00:00:00:00:09"
    cam = "02:00:00:00:00:02"
    stats = {
        ap: _node(ap, d_sent=500_000, d_recv=500_000, m_sent=100, c_sent=50),
        gw: _node(gw, d_sent=450_000, d_recv=450_000),
        cam: _node(cam, d_sent=400_000, d_recv=30_000, c_sent=10),
    }
    links = {(ap, gw), (ap, cam)}
    assert detect_gateway(stats, {ap: {"den"}}, links) == gw


def test_detect_gateway_negatives():
    ap = "0a:00:00:00:00:01"
    quiet = "9c:00:00:00:00:09"
    stats = {
        ap: _node(ap, d_sent=500_000, d_recv=500_000, m_sent=100),
        quiet: _node(quiet, d_sent=10),  # silent but moves almost nothing
    }
    links = {(ap, quiet)}
    assert detect_gateway(stats, {ap: set()}, links) is None

    # a chatty node never qualifies however much it moves
    chatty = "9c:00:00:00:00:10"
    stats[chatty] = _node(chatty, d_sent=900_000, d_recv=900_000, c_sent=1)
    links.add((ap, chatty))
    assert detect_gateway(stats, {ap: set()}, links) is None

    # not linked to any AP: invisible routers stay undetected
    loner = "9c:00:00:00:00:11"
    stats[loner] = _node(loner, d_sent=900_000, d_recv=900_000)
    assert detect_gateway(stats, {ap: set()}, links) is None

    assert detect_gateway({}, {}, set()) is None


def test_detect_gateway_tie_break_prefers_most_data():
    ap = "0a:00:00:00:00:01"
    g1 = "9c:00:00:00:00:01"
    g2 = "9c:00:00:00:00:02"
    stats = {
        ap: _node(ap, d_sent=100, m_sent=1),
        g1: _node(g1, d_sent=500),
        g2: _node(g2, d_sent=700),
    }
    links = {(ap, g1), (ap, g2)}
    assert detect_gateway(stats, {ap: set()}, links) == g2


# ------------------------------------------------------------------ BLE


def test_track_ble_connections_from_scenario(ble_pair):
    records, truth = ble_pair
    conns = {c.access_address: c for c in track_ble_connections(records)}
    assert set(conns) == set(truth.ble_sessions)

    for aa, name in truth.ble_sessions.items():
        conn = conns[aa]
        assert conn.data_frames > 0
        if name == "door-lock":
            assert conn.saw_connect_req
            assert len(conn.participants) == 2
            assert conn.hop_increment is not None
            # radio saw exactly the channels the map allows
            assert conn.channels <= set(conn.mapped_channels())
        else:
            assert not conn.saw_connect_req  # pairing happened before capture
            assert conn.mapped_channels() is None


def test_ble_connection_doc_shape():
    conn = BleConnection(access_address="0000002a", channel_map=0b1011)
    doc = conn.to_doc()
    assert doc["mapped_channels"] == [0, 1, 3]
    assert doc["participants"] == []
    assert doc["saw_connect_req"] is False


# ---------------------------------------------------------------- scoring


def test_confusion_matrix_rates():
    cm = ConfusionMatrix(tp=10, fn=2, fp=3, tn=80)
    assert cm.far == Fraction(3, 83)
    assert cm.frr == Fraction(2, 12)
    assert cm.far_percent == 3.61
    assert cm.frr_percent == 16.67
    assert cm.to_doc()["far_percent"] == 3.61

    empty = ConfusionMatrix(tp=0, fn=0, fp=0, tn=0)
    assert empty.far is None and empty.frr is None
    assert empty.far_percent is None


def test_evaluate_counts_each_cell():
    truth = {"a": CAMERA, "b": CAMERA, "c": OTHERS, "d": OTHERS}
    preds = {"a": CAMERA, "b": OTHERS, "c": CAMERA, "d": OTHERS}
    cm = evaluate(preds, truth)
    assert (cm.tp, cm.fn, cm.fp, cm.tn) == (1, 1, 1, 1)


def test_evaluate_requires_matching_keys():
    with pytest.raises(KeyMismatch):
        evaluate({"a": CAMERA}, {"a": CAMERA, "b": OTHERS})
    with pytest.raises(KeyMismatch):
        evaluate({"a": CAMERA, "zz": OTHERS}, {"a": CAMERA})


# ------------------------------------------------------------ calibration


def test_calibrate_band_mean_plus_minus_stdev():
    samples = [(10.0, 900.0), (14.0, 1100.0)]
    band = calibrate_band(samples)
    # mean 12 sd 2.828..., mean 1000 sd 141.42...
    assert band.r_sr_min == pytest.approx(12 - 2.8284271, rel=1e-6)
    assert band.r_sr_max == pytest.approx(12 + 2.8284271, rel=1e-6)
    assert band.r_bf_min == pytest.approx(1000 - 141.421356, rel=1e-6)
    assert band.r_bf_max == pytest.approx(1000 + 141.421356, rel=1e-6)


def test_calibrate_band_clamps_at_zero_and_needs_two_samples():
    band = calibrate_band([(0.5, 100.0), (10.0, 120.0)])
    assert band.r_sr_min == 0.0  # mean - sd would be negative
    with pytest.raises(InvalidConfig):
        calibrate_band([(10.0, 900.0)])


# ------------------------------------------------------------ full window


def test_classify_window_document(high_load):
    records, truth = high_load
    doc = classify_window(records)
    assert doc["window"]["frames"] == len(records)
    assert doc["band"] == CameraBand().to_doc()
    assert set(doc["cameras"]) == truth.cameras()
    [ap_addr] = doc["access_points"]
    assert truth.roles[ap_addr] == "access_point"
    assert truth.roles[doc["gateway"]] == "gateway"
    assert doc["ble_connections"] == []

    by_addr = {n["address"]: n for n in doc["nodes"]}
    assert by_addr[ap_addr]["role"] == "access_point"
    assert by_addr[doc["gateway"]]["role"] == "gateway"
    for cam in doc["cameras"]:
        assert by_addr[cam]["role"] == "camera"
        assert by_addr[cam]["label"] == CAMERA


def test_classify_window_empty():
    doc = classify_window([])
    assert doc["window"] == {"from_us": None, "to_us": None, "frames": 0}
    assert doc["nodes"] == []
    assert doc["gateway"] is None
