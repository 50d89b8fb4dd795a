"""Hop schedule arithmetic and containment."""

import pytest
from hypothesis import given, strategies as st

from neighborhood.capture.schedule import (
    BLE_ADVERTISING_CHANNELS,
    WIFI_CHANNELS,
    ZIGBEE_CHANNELS,
    ScanConfig,
    build_hop_schedule,
    sweep_time_s,
)
from neighborhood.errors import InvalidConfig


def test_default_channel_plans():
    assert WIFI_CHANNELS == tuple(range(1, 14))
    assert ZIGBEE_CHANNELS == tuple(range(11, 27))
    assert BLE_ADVERTISING_CHANNELS == (37, 38, 39)
    assert ScanConfig.wifi_default().channels == list(WIFI_CHANNELS)
    assert ScanConfig.zigbee_default().channels == list(ZIGBEE_CHANNELS)
    assert ScanConfig.ble_default().channels == list(BLE_ADVERTISING_CHANNELS)


def test_sweep_time_is_dwell_times_channel_count():
    assert sweep_time_s(ScanConfig.wifi_default()) == 390.0
    fast = ScanConfig.wifi_default()
    fast.dwell_s = 5.0
    assert sweep_time_s(fast) == 65.0
    zb = ScanConfig.zigbee_default()
    zb.dwell_s = 10.0
    assert sweep_time_s(zb) == 160.0
    ble = ScanConfig.ble_default()
    ble.dwell_s = 2.0
    assert sweep_time_s(ble) == 6.0


def test_schedule_segments_tile_the_sweep():
    cfg = ScanConfig.wifi_default()
    cfg.dwell_s = 5.0
    sched = build_hop_schedule(cfg)
    assert len(sched.segments) == 13
    assert sched.segments[0].start_s == 0.0
    for prev, cur in zip(sched.segments, sched.segments[1:]):
        assert cur.start_s == pytest.approx(prev.end_s)
    assert sched.total_duration_s == pytest.approx(65.0)
    assert sched.channels == list(WIFI_CHANNELS)


def test_contains_respects_segment_boundaries():
    cfg = ScanConfig.wifi_default()
    cfg.dwell_s = 5.0
    sched = build_hop_schedule(cfg)
    # channel 1 owns [0, 5), channel 2 owns [5, 10)
    assert sched.contains(1, 0.0)
    assert sched.contains(1, 4.999)
    assert not sched.contains(1, 5.0)
    assert sched.contains(2, 5.0)
    assert not sched.contains(1, -0.1)
    assert sched.channel_at(-0.1) is None
    # past the end of the scan nothing is audible
    assert sched.channel_at(65.0) is None
    assert not sched.contains(13, 65.0)


def test_hops_cycle_the_channel_list():
    cfg = ScanConfig("ble", channels=[37, 38, 39], dwell_s=1.0, hops=5)
    sched = build_hop_schedule(cfg)
    assert sched.channels == [37, 38, 39, 37, 38]
    assert sched.total_duration_s == pytest.approx(5.0)
    # t=3.5 is the second visit to channel 37
    assert sched.channel_at(3.5) == 37


def test_config_validation():
    with pytest.raises(InvalidConfig):
        ScanConfig("wifi", channels=[1], dwell_s=0.0).validate()
    with pytest.raises(InvalidConfig):
        ScanConfig("wifi", channels=[1], dwell_s=-3.0).validate()
    with pytest.raises(InvalidConfig):
        ScanConfig("lorawan", channels=[1]).validate()
    with pytest.raises(InvalidConfig):
        ScanConfig("wifi", channels=[]).validate()
    with pytest.raises(InvalidConfig):
        ScanConfig("wifi", channels=[1, 1, 6]).validate()
    with pytest.raises(InvalidConfig):
        ScanConfig("wifi", channels=[1], hops=0).validate()
    ScanConfig("wifi", channels=[1, 6, 11]).validate()


def test_config_doc_round_trip():
    cfg = ScanConfig("zigbee", channels=[11, 15, 20], dwell_s=7.5, hops=9)
    assert ScanConfig.from_doc(cfg.to_doc()) == cfg
    with pytest.raises(InvalidConfig):
        ScanConfig.from_doc({"protocol": "wifi", "channels": [1], "bogus": 1})
    with pytest.raises(InvalidConfig):
        ScanConfig.from_doc({"channels": [1]})
    with pytest.raises(InvalidConfig):
        ScanConfig.from_doc("not a dict")


@given(
    dwell=st.floats(min_value=0.1, max_value=120.0,
                    allow_nan=False, allow_infinity=False),
    n_channels=st.integers(min_value=1, max_value=16),
)
def test_sweep_time_scales_linearly(dwell, n_channels):
    channels = list(range(11, 11 + n_channels))
    cfg = ScanConfig("zigbee", channels=channels, dwell_s=dwell)
    assert sweep_time_s(cfg) == pytest.approx(dwell * n_channels)
    sched = build_hop_schedule(cfg)
    assert len(sched.segments) == n_channels
    assert sched.total_duration_s == pytest.approx(dwell * n_channels)


@given(
    dwell=st.floats(min_value=0.5, max_value=60.0,
                    allow_nan=False, allow_infinity=False),
    t=st.floats(min_value=0.0, max_value=10_000.0,
                allow_nan=False, allow_infinity=False),
)
def test_at_most_one_channel_owns_any_instant(dwell, t):
    cfg = ScanConfig.wifi_default()
    cfg.dwell_s = dwell
    sched = build_hop_schedule(cfg)
    owners = [ch for ch in WIFI_CHANNELS if sched.contains(ch, t)]
    if t < sched.total_duration_s:
        assert len(owners) == 1
    else:
        assert owners == []
