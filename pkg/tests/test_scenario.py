"""Synthetic traffic generation: determinism, planted truth, spec files."""

import pytest

from neighborhood.capture.scenario import (
    DeviceSpec,
    PRESETS,
    ScenarioSpec,
    generate_scenario,
)
from neighborhood.errors import InvalidSpec
from neighborhood.frames import model
from neighborhood.metrics import aggregate


def test_same_seed_same_frames():
    a, _ = generate_scenario(ScenarioSpec.high_load(seed=5, duration_s=10.0))
    b, _ = generate_scenario(ScenarioSpec.high_load(seed=5, duration_s=10.0))
    assert a == b  # byte-for-byte, including raw frames


def test_different_seed_different_frames():
    a, _ = generate_scenario(ScenarioSpec.high_load(seed=5, duration_s=10.0))
    b, _ = generate_scenario(ScenarioSpec.high_load(seed=6, duration_s=10.0))
    assert a != b


def test_records_come_out_in_timestamp_order(high_load):
    records, _ = high_load
    stamps = [r.timestamp_us for r in records]
    assert stamps == sorted(stamps)


def test_truth_names_every_planted_device(high_load):
    records, truth = high_load
    assert sorted(truth.names.values()) == sorted(
        ["ap", "router", "cam-porch", "cam-hall", "cam-garage", "speaker", "laptop"])
    assert len(truth.cameras()) == 3
    # every truth address actually transmits
    senders = {r.src for r in records if r.src}
    for addr in truth.names:
        assert addr in senders, f"{addr} never sent a frame"


def test_wifi_truth_ssid_and_links(high_load):
    records, truth = high_load
    [(ap_addr, ssid)] = truth.ssids.items()
    assert ssid == "lattice-24g"
    assert truth.roles[ap_addr] == "access_point"
    # stations link to the AP, never to each other
    for a, b in truth.links:
        assert ap_addr in (a, b)
    beacons = [r for r in records if r.subtype == "beacon"]
    assert beacons and all(r.ssid == ssid for r in beacons)
    assert all(r.src == ap_addr for r in beacons)


def test_all_wifi_frames_share_the_ap_channel(high_load):
    records, _ = high_load
    assert {r.channel for r in records} == {6}
    assert {r.protocol for r in records} == {model.WIFI}


def test_beacons_tick_every_102400_us(high_load):
    records, _ = high_load
    stamps = [r.timestamp_us for r in records if r.subtype == "beacon"]
    assert len(stamps) > 500
    gaps = {b - a for a, b in zip(stamps, stamps[1:])}
    assert gaps == {102_400}


def test_low_load_control_bytes_near_data_bytes(low_load):
    # idle clients keep chatting: per non-infrastructure device, control
    # volume stays within a factor of 2 of data volume
    records, truth = low_load
    stats = aggregate(records)
    for addr, role in truth.roles.items():
        if role in ("access_point", "gateway"):
            continue
        entry = stats[addr]
        assert entry.d_bytes > 0 and entry.c_bytes > 0, (truth.names[addr], role)
        factor = max(entry.c_bytes / entry.d_bytes, entry.d_bytes / entry.c_bytes)
        assert factor <= 2.0, (truth.names[addr], factor)


def test_ble_pair_truth(ble_pair):
    records, truth = ble_pair
    assert {r.protocol for r in records} == {model.BLE}
    # lock mints a fresh access address per connect cycle; tracker keeps one
    sessions = list(truth.ble_sessions.values())
    assert sessions.count("door-lock") >= 2
    assert sessions.count("wristband") == 1
    names = {r.ble_local_name for r in records if r.ble_local_name}
    assert "bolt-7f" in names


def test_zigbee_truth(zigbee_mesh):
    records, truth = zigbee_mesh
    assert {r.protocol for r in records} == {model.ZIGBEE}
    assert truth.pan_id is not None
    pans = {f"{r.pan_id:04x}" for r in records if r.pan_id is not None}
    assert pans == {truth.pan_id}
    assert {r.channel for r in records} == {15}
    roles = set(truth.roles.values())
    assert roles == {"zigbee_bridge", "zigbee_bulb"}


def test_zero_duration_means_empty_stream_and_labels():
    records, truth = generate_scenario(ScenarioSpec.high_load(duration_s=0.0))
    assert records == []
    assert truth.names == {} and truth.roles == {} and truth.links == set()


def test_spec_validation_rejects_bad_scenarios():
    with pytest.raises(InvalidSpec):
        generate_scenario(ScenarioSpec(devices=[]))
    with pytest.raises(InvalidSpec):
        ScenarioSpec(duration_s=-1, devices=[
            DeviceSpec("ap", "access_point")]).validate()
    with pytest.raises(InvalidSpec):
        ScenarioSpec(devices=[
            DeviceSpec("a", "access_point"),
            DeviceSpec("a", "access_point")]).validate()
    with pytest.raises(InvalidSpec):
        ScenarioSpec(devices=[DeviceSpec("x", "toaster")]).validate()
    # wifi station without an AP has nobody to talk to
    with pytest.raises(InvalidSpec):
        ScenarioSpec(devices=[DeviceSpec("cam", "camera_streaming")]).validate()
    # bulbs need a bridge
    with pytest.raises(InvalidSpec):
        ScenarioSpec(devices=[DeviceSpec("bulb", "zigbee_bulb")]).validate()


def test_presets_all_validate():
    for name, factory in PRESETS.items():
        spec = factory()
        spec.validate()
        assert spec.devices, name


def test_spec_file_round_trip():
    text = """
[scenario]
seed = 99
duration_s = 12.5

[device:ap]
profile = access_point
channel = 11
ssid = corner-den

[device:cam]
profile = camera_streaming
up_fps = 35
"""
    spec = ScenarioSpec.from_text(text)
    assert spec.seed == 99
    assert spec.duration_s == 12.5
    ap, cam = spec.devices
    assert (ap.name, ap.channel, ap.ssid) == ("ap", 11, "corner-den")
    assert cam.params == {"up_fps": 35.0}

    records, truth = generate_scenario(spec)
    assert records
    assert "corner-den" in truth.ssids.values()


@pytest.mark.parametrize("text,fragment", [
    ("[device:x]\nprofile = access_point\n[weird]\nk = v", "unexpected section"),
    ("[device:x]\nchannel = 6", "lacks a profile"),
    ("[device:x]\nprofile = access_point\nchannel = six", "bad channel"),
    ("[device:x]\nprofile = access_point\nup_fps = fast", "not a number"),
    ("[scenario]\nseed = pi\n[device:x]\nprofile = access_point",
     r"bad \[scenario\]"),
    ("not ini at all [", "unreadable"),
])
def test_spec_file_errors(text, fragment):
    with pytest.raises(InvalidSpec, match=fragment):
        ScenarioSpec.from_text(text)
