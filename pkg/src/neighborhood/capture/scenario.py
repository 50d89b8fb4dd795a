"""Synthetic neighborhoods with known ground truth.

Ideal for demos and for checking the analysis end to end: the generator
returns both the frame stream and a label table, so a test can ask whether
classification found exactly the devices that were planted.

Traffic shapes mirror the live behavior of the gear they are named after:

  camera_streaming   heavy uplink video, light downlink control
  camera_idle        keepalive trickle plus power-save polls
  audio_streamer     downlink-heavy media pull (smart speaker)
  browser_station    downlink-leaning interactive use
  access_point       beacons, probe responses, relays everything
  gateway            upstream router seen only through relayed data; it
                     never sends management or control of its own
  ble_lock           advertises by name, accepts short connections with a
                     fresh access address and a narrow channel map each time
  ble_tracker        long-lived connection, no advertising, full hop set
  zigbee_bridge      hub polled by and commanding the bulbs on one PAN
  zigbee_bulb        reports more than it is told

Intervals jitter by +-20% and WiFi payload sizes by +-20%, all from one
seeded RNG, so a given spec always produces the identical byte stream.
"""

import configparser
import random
from dataclasses import dataclass, field

from ..errors import InvalidSpec
from ..frames import ble as ble_parse
from ..frames import build, model, wifi, zigbee
from ..frames.model import CaptureMeta, ConnectionParams, FrameRecord

WIFI_PROFILES = (
    "camera_streaming",
    "camera_idle",
    "audio_streamer",
    "browser_station",
    "access_point",
    "gateway",
)
BLE_PROFILES = ("ble_lock", "ble_tracker")
ZIGBEE_PROFILES = ("zigbee_bridge", "zigbee_bulb")

_PROFILE_PROTOCOL = {p: model.WIFI for p in WIFI_PROFILES}
_PROFILE_PROTOCOL.update({p: model.BLE for p in BLE_PROFILES})
_PROFILE_PROTOCOL.update({p: model.ZIGBEE for p in ZIGBEE_PROFILES})

# nominal station behavior; any key can be overridden per device
_WIFI_DEFAULTS = {
    "camera_streaming": dict(
        up_fps=40, up_bytes=1300, down_fps=8, down_bytes=500,
        ack_every=4, ps_poll_fps=0,
    ),
    "camera_idle": dict(
        up_fps=1.2, up_bytes=90, down_fps=1.0, down_bytes=80,
        ack_every=1, ps_poll_fps=7,
    ),
    "audio_streamer": dict(
        up_fps=10, up_bytes=400, down_fps=33, down_bytes=1200,
        ack_every=4, ps_poll_fps=0,
    ),
    "browser_station": dict(
        up_fps=5, up_bytes=400, down_fps=16, down_bytes=1200,
        ack_every=4, ps_poll_fps=0,
    ),
}

BEACON_INTERVAL_US = 102_400
ACK_BYTES = 14
WIFI_DATA_MIN = 34


@dataclass
class DeviceSpec:
    name: str
    profile: str
    channel: "int | None" = None
    ssid: "str | None" = None
    local_name: "str | None" = None
    params: "dict[str, float]" = field(default_factory=dict)

    @property
    def protocol(self) -> str:
        return _PROFILE_PROTOCOL.get(self.profile, "?")

    def param(self, key: str, default: float) -> float:
        return float(self.params.get(key, default))


@dataclass
class ScenarioSpec:
    seed: int = 7
    duration_s: float = 60.0
    devices: "list[DeviceSpec]" = field(default_factory=list)

    def validate(self) -> None:
        if not self.devices:
            raise InvalidSpec("scenario has no devices")
        if self.duration_s < 0:
            raise InvalidSpec(f"duration must not be negative, got {self.duration_s}")
        names = [d.name for d in self.devices]
        if len(set(names)) != len(names):
            raise InvalidSpec("device names repeat")
        for dev in self.devices:
            if dev.profile not in _PROFILE_PROTOCOL:
                raise InvalidSpec(f"unknown profile {dev.profile!r} for {dev.name!r}")
        wifi_devs = [d for d in self.devices if d.protocol == model.WIFI]
        aps = [d for d in wifi_devs if d.profile == "access_point"]
        gws = [d for d in wifi_devs if d.profile == "gateway"]
        if wifi_devs and len(aps) != 1:
            raise InvalidSpec("WiFi scenarios need exactly one access_point")
        if len(gws) > 1:
            raise InvalidSpec("at most one gateway")
        bulbs = [d for d in self.devices if d.profile == "zigbee_bulb"]
        bridges = [d for d in self.devices if d.profile == "zigbee_bridge"]
        if bulbs and len(bridges) != 1:
            raise InvalidSpec("zigbee_bulb devices need exactly one zigbee_bridge")
        if len(bridges) > 1:
            raise InvalidSpec("at most one zigbee_bridge")

    # ------------------------------------------------------------ presets

    @classmethod
    def high_load(cls, seed: int = 7, duration_s: float = 60.0) -> "ScenarioSpec":
        return cls(seed=seed, duration_s=duration_s, devices=[
            DeviceSpec("ap", "access_point", channel=6, ssid="lattice-24g"),
            DeviceSpec("router", "gateway"),
            DeviceSpec("cam-porch", "camera_streaming"),
            DeviceSpec("cam-hall", "camera_streaming"),
            DeviceSpec("cam-garage", "camera_streaming"),
            DeviceSpec("speaker", "audio_streamer"),
            DeviceSpec("laptop", "browser_station"),
        ])

    @classmethod
    def low_load(cls, seed: int = 11, duration_s: float = 60.0) -> "ScenarioSpec":
        light = dict(up_fps=1.5, up_bytes=100, down_fps=1.5, down_bytes=110,
                     ack_every=1, ps_poll_fps=11)
        return cls(seed=seed, duration_s=duration_s, devices=[
            DeviceSpec("ap", "access_point", channel=6, ssid="lattice-24g"),
            DeviceSpec("router", "gateway"),
            DeviceSpec("cam-porch", "camera_idle"),
            DeviceSpec("cam-hall", "camera_idle"),
            DeviceSpec("cam-garage", "camera_idle"),
            DeviceSpec("laptop", "browser_station", params=light),
        ])

    @classmethod
    def ble_pair(cls, seed: int = 23, duration_s: float = 90.0) -> "ScenarioSpec":
        return cls(seed=seed, duration_s=duration_s, devices=[
            DeviceSpec("door-lock", "ble_lock", local_name="bolt-7f"),
            DeviceSpec("wristband", "ble_tracker"),
        ])

    @classmethod
    def zigbee_mesh(cls, seed: int = 31, duration_s: float = 120.0) -> "ScenarioSpec":
        return cls(seed=seed, duration_s=duration_s, devices=[
            DeviceSpec("bridge", "zigbee_bridge", channel=15),
            DeviceSpec("bulb-desk", "zigbee_bulb", params={"n_actions": 1}),
            DeviceSpec("bulb-shelf", "zigbee_bulb", params={"n_actions": 6}),
            DeviceSpec("bulb-hall", "zigbee_bulb", params={"n_actions": 6}),
        ])

    # ---------------------------------------------------------- INI files

    @classmethod
    def from_text(cls, text: str) -> "ScenarioSpec":
        parser = configparser.ConfigParser(interpolation=None)
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise InvalidSpec(f"unreadable scenario file: {exc}") from exc

        spec = cls(devices=[])
        if parser.has_section("scenario"):
            sec = parser["scenario"]
            try:
                spec.seed = sec.getint("seed", spec.seed)
                spec.duration_s = sec.getfloat("duration_s", spec.duration_s)
            except ValueError as exc:
                raise InvalidSpec(f"bad [scenario] value: {exc}") from exc

        for section in parser.sections():
            if section == "scenario":
                continue
            if not section.startswith("device:"):
                raise InvalidSpec(f"unexpected section [{section}]")
            name = section.split(":", 1)[1].strip()
            sec = parser[section]
            if "profile" not in sec:
                raise InvalidSpec(f"[{section}] lacks a profile")
            dev = DeviceSpec(name=name, profile=sec["profile"].strip())
            for key, value in sec.items():
                if key in ("profile", "protocol"):
                    continue  # protocol is implied by the profile
                if key == "channel":
                    try:
                        dev.channel = int(value)
                    except ValueError as exc:
                        raise InvalidSpec(f"[{section}] bad channel {value!r}") from exc
                elif key == "ssid":
                    dev.ssid = value
                elif key == "local_name":
                    dev.local_name = value
                else:
                    try:
                        dev.params[key] = float(value)
                    except ValueError as exc:
                        raise InvalidSpec(
                            f"[{section}] value {key}={value!r} is not a number"
                        ) from exc
            spec.devices.append(dev)

        spec.validate()
        return spec

    @classmethod
    def from_file(cls, path) -> "ScenarioSpec":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_text(fh.read())


PRESETS = {
    "high_load": ScenarioSpec.high_load,
    "low_load": ScenarioSpec.low_load,
    "ble_pair": ScenarioSpec.ble_pair,
    "zigbee_mesh": ScenarioSpec.zigbee_mesh,
}


@dataclass
class GroundTruth:
    """What the generator planted, keyed the way analysis will see it."""

    roles: "dict[str, str]" = field(default_factory=dict)    # addr -> profile
    names: "dict[str, str]" = field(default_factory=dict)    # addr -> device name
    ssids: "dict[str, str]" = field(default_factory=dict)    # AP addr -> ssid
    links: "set[tuple[str, str]]" = field(default_factory=set)
    ble_sessions: "dict[str, str]" = field(default_factory=dict)  # aa hex -> name
    pan_id: "str | None" = None

    def cameras(self) -> "set[str]":
        return {a for a, r in self.roles.items() if r == "camera_streaming"}


class _Emitter:
    """Collects (timestamp, raw frame) events, then parses them in order."""

    _PARSERS = {
        model.WIFI: wifi.parse,
        model.BLE: ble_parse.parse,
        model.ZIGBEE: zigbee.parse,
    }

    def __init__(self):
        self.events = []

    def emit(self, ts_us, protocol, raw, channel, rssi):
        self.events.append((int(ts_us), len(self.events), protocol, raw, channel, rssi))

    def records(self) -> "list[FrameRecord]":
        self.events.sort(key=lambda e: (e[0], e[1]))
        out = []
        for ts_us, _, protocol, raw, channel, rssi in self.events:
            meta = CaptureMeta(ts_us, channel, rssi)
            out.append(self._PARSERS[protocol](raw, meta))
        return out


def _alloc_mac(rng: random.Random, used: set) -> str:
    while True:
        octets = bytes([rng.choice((0x02, 0x06, 0x0A, 0x0E))]) + bytes(
            rng.getrandbits(8) for _ in range(5)
        )
        addr = ":".join(f"{b:02x}" for b in octets)
        if addr not in used:
            used.add(addr)
            return addr


def _alloc_ble_static(rng: random.Random, used: set) -> str:
    # random static address: two top bits set
    while True:
        octets = bytes([0xC0 | rng.getrandbits(6)]) + bytes(
            rng.getrandbits(8) for _ in range(5)
        )
        addr = ":".join(f"{b:02x}" for b in octets)
        if addr not in used:
            used.add(addr)
            return addr


def _rssi(rng: random.Random, base: int) -> int:
    return base + rng.randint(-3, 3)


def _link(a: str, b: str) -> "tuple[str, str]":
    return (a, b) if a <= b else (b, a)


# ----------------------------------------------------------------- WiFi


class _WifiNet:
    def __init__(self, em, rng, duration_us, ap, gateway, stations, truth):
        self.em = em
        self.rng = rng
        self.duration_us = duration_us
        used: set = set()
        self.ap_mac = _alloc_mac(rng, used)
        self.gw_mac = _alloc_mac(rng, used) if gateway else None
        self.ssid = ap.ssid or "lattice-24g"
        self.channel = ap.channel or 6
        self.seq = {}
        self.base_rssi = {self.ap_mac: rng.randint(-45, -35)}
        if self.gw_mac:
            self.base_rssi[self.gw_mac] = self.base_rssi[self.ap_mac]

        truth.roles[self.ap_mac] = "access_point"
        truth.names[self.ap_mac] = ap.name
        truth.ssids[self.ap_mac] = self.ssid
        if self.gw_mac:
            truth.roles[self.gw_mac] = "gateway"
            truth.names[self.gw_mac] = gateway.name
            truth.links.add(_link(self.ap_mac, self.gw_mac))

        self.station_macs = {}
        for dev in stations:
            mac = _alloc_mac(rng, used)
            self.station_macs[dev.name] = mac
            self.base_rssi[mac] = rng.randint(-75, -40)
            truth.roles[mac] = dev.profile
            truth.names[mac] = dev.name
            truth.links.add(_link(mac, self.ap_mac))

    def _next_seq(self, mac: str) -> int:
        self.seq[mac] = (self.seq.get(mac, 0) + 1) & 0xFFF
        return self.seq[mac]

    def _put(self, ts, raw, transmitter: str):
        self.em.emit(ts, model.WIFI, raw, self.channel,
                     _rssi(self.rng, self.base_rssi[transmitter]))

    def beacons(self):
        extra = bytes([221, 24]) + bytes(24)  # vendor element padding
        t = 0
        while t < self.duration_us:
            raw = build.wifi_beacon(self.ap_mac, self.ssid,
                                    seq=self._next_seq(self.ap_mac), extra=extra)
            self._put(t, raw, self.ap_mac)
            t += BEACON_INTERVAL_US

    def probe_exchange(self, mac: str):
        t = self.rng.uniform(2e5, 1.5e6)
        self._put(t, build.wifi_probe_req(mac, seq=self._next_seq(mac)), mac)
        resp = build.wifi_probe_resp(self.ap_mac, mac, self.ssid,
                                     seq=self._next_seq(self.ap_mac))
        self._put(t + 25_000, resp, self.ap_mac)

    def station(self, dev: DeviceSpec):
        mac = self.station_macs[dev.name]
        defaults = _WIFI_DEFAULTS[dev.profile]
        p = {k: dev.param(k, v) for k, v in defaults.items()}
        self.probe_exchange(mac)
        self._flow(p["up_fps"], p["up_bytes"], int(p["ack_every"]), up=True, mac=mac)
        self._flow(p["down_fps"], p["down_bytes"], int(p["ack_every"]), up=False, mac=mac)
        self._ps_polls(p["ps_poll_fps"], mac)

    def _flow(self, fps, nominal, ack_every, *, up: bool, mac: str):
        if fps <= 0:
            return
        rng = self.rng
        t = rng.uniform(0, 1e6 / fps)
        n = 0
        while t < self.duration_us:
            size = max(WIFI_DATA_MIN, round(nominal * rng.uniform(0.8, 1.2)))
            ts = int(t)
            if up:
                first = build.wifi_data(mac, self.ap_mac, bssid=self.ap_mac,
                                        length=size, to_ds=True,
                                        seq=self._next_seq(mac))
                self._put(ts, first, mac)
                if ack_every and n % ack_every == 0:
                    self._put(ts + 44, build.wifi_ack(mac), self.ap_mac)
                if self.gw_mac:
                    relay = build.wifi_data(self.ap_mac, self.gw_mac,
                                            bssid=self.ap_mac, length=size,
                                            from_ds=True,
                                            seq=self._next_seq(self.ap_mac))
                    self._put(ts + self.rng.randint(300, 900), relay, self.ap_mac)
            else:
                if self.gw_mac:
                    feed = build.wifi_data(self.gw_mac, self.ap_mac,
                                           bssid=self.ap_mac, length=size,
                                           to_ds=True,
                                           seq=self._next_seq(self.gw_mac))
                    self._put(ts, feed, self.gw_mac)
                relay = build.wifi_data(self.ap_mac, mac, bssid=self.ap_mac,
                                        length=size, from_ds=True,
                                        seq=self._next_seq(self.ap_mac))
                relay_ts = ts + self.rng.randint(300, 900)
                self._put(relay_ts, relay, self.ap_mac)
                if ack_every and n % ack_every == 0:
                    self._put(relay_ts + 44, build.wifi_ack(self.ap_mac), mac)
            n += 1
            t += 1e6 / fps * rng.uniform(0.8, 1.2)

    def _ps_polls(self, fps, mac: str):
        if fps <= 0:
            return
        t = self.rng.uniform(0, 1e6 / fps)
        while t < self.duration_us:
            self._put(int(t), build.wifi_ps_poll(mac, self.ap_mac), mac)
            t += 1e6 / fps * self.rng.uniform(0.8, 1.2)


def _gen_wifi(em, rng, duration_us, devices, truth):
    ap = next(d for d in devices if d.profile == "access_point")
    gateway = next((d for d in devices if d.profile == "gateway"), None)
    stations = [d for d in devices if d.profile in _WIFI_DEFAULTS]
    net = _WifiNet(em, rng, duration_us, ap, gateway, stations, truth)
    net.beacons()
    for dev in stations:
        net.station(dev)


# ------------------------------------------------------------------ BLE


def _gen_ble_lock(em, rng, duration_us, dev, truth, used_addrs, used_aas):
    lock = _alloc_mac(rng, used_addrs)          # public, stable
    phone = _alloc_ble_static(rng, used_addrs)  # random static, stable
    name = dev.local_name or "bolt-7f"
    sessions = int(dev.param("n_sessions", 3))
    frames_per = int(dev.param("session_frames", 40))
    lock_rssi = rng.randint(-70, -50)
    phone_rssi = rng.randint(-60, -40)

    truth.roles[lock] = "ble_lock"
    truth.roles[phone] = "ble_phone"
    truth.names[lock] = dev.name
    truth.names[phone] = f"{dev.name}-phone"
    truth.links.add(_link(lock, phone))

    for s in range(sessions):
        start = duration_us * (s + 0.3) / sessions + rng.uniform(0, duration_us * 0.05)
        adv_ts = []
        for k in range(5):
            ts = start + k * 100_000 * rng.uniform(0.9, 1.1)
            ch = 37 + k % 3
            raw = build.ble_adv_ind(lock, name=name)
            em.emit(ts, model.BLE, raw, ch, _rssi(rng, lock_rssi))
            adv_ts.append((ts, ch))

        ts, ch = adv_ts[2]
        em.emit(ts + 350, model.BLE,
                build.ble_scan_req(phone, lock), ch, _rssi(rng, phone_rssi))
        em.emit(ts + 700, model.BLE,
                build.ble_scan_resp(lock, name=name), ch, _rssi(rng, lock_rssi))

        while True:
            aa = rng.getrandbits(32)
            if aa not in used_aas and aa != ble_parse.ADVERTISING_ACCESS_ADDRESS:
                used_aas.add(aa)
                break
        hop_channels = sorted(rng.sample(range(37), 4))
        chmap = 0
        for c in hop_channels:
            chmap |= 1 << c
        params = ConnectionParams(
            access_address=aa,
            crc_init=rng.getrandbits(24),
            window_size=2,
            window_offset=rng.randint(0, 30),
            interval=39,  # x1.25ms = 48.75ms
            latency=0,
            timeout=500,
            channel_map=chmap,
            hop_increment=rng.randint(5, 16),
            sleep_clock_accuracy=5,
        )
        ts, ch = adv_ts[4]
        em.emit(ts + 1_200, model.BLE,
                build.ble_connect_req(phone, lock, params), ch,
                _rssi(rng, phone_rssi))
        truth.ble_sessions[f"{aa:08x}"] = dev.name

        t = ts + 6_000
        for i in range(frames_per):
            ch = hop_channels[i % 4]
            if i % 12 == 5:
                raw = build.ble_data(aa, llid=3, payload=rng.randint(2, 12))
            else:
                raw = build.ble_data(aa, llid=2, payload=rng.randint(4, 20),
                                     sn=i & 1, nesn=i + 1 & 1)
            base = lock_rssi if i % 2 else phone_rssi
            em.emit(t, model.BLE, raw, ch, _rssi(rng, base))
            t += 48_750 * rng.uniform(0.9, 1.1)


def _gen_ble_tracker(em, rng, duration_us, dev, truth, used_aas):
    while True:
        aa = rng.getrandbits(32)
        if aa not in used_aas and aa != ble_parse.ADVERTISING_ACCESS_ADDRESS:
            used_aas.add(aa)
            break
    truth.ble_sessions[f"{aa:08x}"] = dev.name
    bursts = int(dev.param("n_bursts", 2))
    frames_per = int(dev.param("burst_frames", 150))
    base = rng.randint(-65, -45)

    channels = list(range(37))
    rng.shuffle(channels)
    ch_i = 0
    for b in range(bursts):
        t = duration_us * (b + 0.25) / bursts
        for i in range(frames_per):
            ch = channels[ch_i % 37]
            ch_i += 1
            if i % 11 == 7:
                raw = build.ble_data(aa, llid=3, payload=rng.randint(2, 10))
            else:
                raw = build.ble_data(aa, llid=2, payload=rng.randint(8, 27),
                                     sn=i & 1, nesn=i + 1 & 1)
            em.emit(t, model.BLE, raw, ch, _rssi(rng, base))
            t += 30_000 * rng.uniform(0.8, 1.2)


# --------------------------------------------------------------- Zigbee


class _ZigbeeNet:
    def __init__(self, em, rng, duration_us, bridge, bulbs, truth):
        self.em = em
        self.rng = rng
        self.duration_us = duration_us
        self.pan = int(bridge.param("pan", 0x1A62))
        self.channel = bridge.channel or 15
        self.bridge_addr = "00:00"
        self.seq = {}
        self.base_rssi = {self.bridge_addr: rng.randint(-50, -40)}

        truth.pan_id = f"{self.pan:04x}"
        truth.roles[self.bridge_addr] = "zigbee_bridge"
        truth.names[self.bridge_addr] = bridge.name

        self.bulb_addrs = {}
        for i, dev in enumerate(bulbs, start=1):
            addr = f"{i >> 8:02x}:{i & 0xFF:02x}"
            self.bulb_addrs[dev.name] = addr
            self.base_rssi[addr] = rng.randint(-75, -50)
            truth.roles[addr] = "zigbee_bulb"
            truth.names[addr] = dev.name
            truth.links.add(_link(addr, self.bridge_addr))

    def _next_seq(self, addr: str) -> int:
        self.seq[addr] = (self.seq.get(addr, 0) + 1) & 0xFF
        return self.seq[addr]

    def _put(self, ts, raw, transmitter: str):
        self.em.emit(ts, model.ZIGBEE, raw, self.channel,
                     _rssi(self.rng, self.base_rssi[transmitter]))

    def _data(self, ts, src, dst, length, *, ack=True):
        seq = self._next_seq(src)
        raw = build.zigbee_data(self.pan, src, dst, seq=seq, length=length,
                                ack_request=ack)
        self._put(ts, raw, src)
        if ack and dst != "ff:ff":
            self._put(ts + 2_000, build.zigbee_ack(seq), dst)

    def _every(self, interval_s, phase_s=0.0):
        t = phase_s * 1e6 + self.rng.uniform(0, 1e5)
        step = interval_s * 1e6
        while t < self.duration_us:
            yield int(t)
            t += step * self.rng.uniform(0.9, 1.1)

    def run(self, bulbs):
        for ts in self._every(15, 2.0):
            raw = build.zigbee_beacon(self.pan, self.bridge_addr,
                                      seq=self._next_seq(self.bridge_addr))
            self._put(ts, raw, self.bridge_addr)
        for ts in self._every(15, 3.5):
            self._data(ts, self.bridge_addr, "ff:ff", 60, ack=False)

        for dev in bulbs:
            addr = self.bulb_addrs[dev.name]
            for ts in self._every(5, 1.0):
                seq = self._next_seq(addr)
                raw = build.zigbee_mac_command(self.pan, addr, self.bridge_addr,
                                               seq=seq)
                self._put(ts, raw, addr)
                self._put(ts + 2_000, build.zigbee_ack(seq), self.bridge_addr)
            for ts in self._every(10, 4.0):
                self._data(ts, addr, self.bridge_addr, 45)
            for ts in self._every(15, 7.0):
                self._data(ts, self.bridge_addr, addr, 30)

            n_actions = int(dev.param("n_actions", 2))
            times = sorted(
                self.rng.uniform(5e6, max(self.duration_us - 5e6, 6e6))
                for _ in range(n_actions)
            )
            for ts in times:
                self._data(int(ts), self.bridge_addr, addr, 60)
                self._data(int(ts) + 40_000, addr, self.bridge_addr, 45)
                self._data(int(ts) + 70_000, addr, self.bridge_addr, 45)


def _gen_zigbee(em, rng, duration_us, devices, truth):
    bridge = next(d for d in devices if d.profile == "zigbee_bridge")
    bulbs = [d for d in devices if d.profile == "zigbee_bulb"]
    net = _ZigbeeNet(em, rng, duration_us, bridge, bulbs, truth)
    net.run(bulbs)


# ------------------------------------------------------------ front door


def generate_scenario(spec: ScenarioSpec) -> "tuple[list[FrameRecord], GroundTruth]":
    """Produce the frame stream and the labels that should fall out of it."""
    spec.validate()
    if spec.duration_s == 0:
        return [], GroundTruth()  # zero airtime: nothing sent, nobody labeled
    rng = random.Random(spec.seed)
    em = _Emitter()
    truth = GroundTruth()
    duration_us = spec.duration_s * 1e6

    wifi_devs = [d for d in spec.devices if d.protocol == model.WIFI]
    if wifi_devs:
        _gen_wifi(em, rng, duration_us, wifi_devs, truth)

    used_addrs: set = set()
    used_aas: set = set()
    for dev in spec.devices:
        if dev.profile == "ble_lock":
            _gen_ble_lock(em, rng, duration_us, dev, truth, used_addrs, used_aas)
        elif dev.profile == "ble_tracker":
            _gen_ble_tracker(em, rng, duration_us, dev, truth, used_aas)

    zig = [d for d in spec.devices if d.protocol == model.ZIGBEE]
    if zig:
        _gen_zigbee(em, rng, duration_us, zig, truth)

    return em.records(), truth
