"""Classic pcap containers and the per-packet pseudo-headers inside them.

Readable link types cover what the usual capture tools emit for these
radios; written files use one fixed link type per protocol so they open in
any dissector:

  wifi   -> 127 (radiotap)     also read: 105 (bare 802.11)
  ble    -> 256 (LL + phdr)    also read: 251 (bare link layer)
  zigbee -> 283 (802.15.4 TAP) also read: 195 (802.15.4 with FCS)

Timestamps are classic-pcap microseconds, which is also the pipeline's
native unit.
"""

import struct

from ..errors import (
    CorruptFile,
    MixedLinkTypes,
    TruncatedFrame,
    UnsupportedLinkType,
)
from ..frames import ble, model, wifi, zigbee
from ..frames.model import CaptureMeta, FrameRecord

LINKTYPE_IEEE802_11 = 105
LINKTYPE_RADIOTAP = 127
LINKTYPE_IEEE802_15_4_FCS = 195
LINKTYPE_BLE_LL = 251
LINKTYPE_BLE_LL_PHDR = 256
LINKTYPE_IEEE802_15_4_TAP = 283

WRITE_LINK_TYPE = {
    model.WIFI: LINKTYPE_RADIOTAP,
    model.BLE: LINKTYPE_BLE_LL_PHDR,
    model.ZIGBEE: LINKTYPE_IEEE802_15_4_TAP,
}

READ_LINK_TYPES = {
    LINKTYPE_IEEE802_11,
    LINKTYPE_RADIOTAP,
    LINKTYPE_IEEE802_15_4_FCS,
    LINKTYPE_BLE_LL,
    LINKTYPE_BLE_LL_PHDR,
    LINKTYPE_IEEE802_15_4_TAP,
}

PCAP_MAGIC = 0xA1B2C3D4
_GLOBAL_HDR = struct.Struct("<IHHiIII")
_PKT_HDR = struct.Struct("<IIII")


# ------------------------------------------------------------ radiotap

# (size, alignment) for the first present word's fields, in bit order
_RADIOTAP_FIELDS = [
    (8, 8),   # 0 TSFT
    (1, 1),   # 1 flags
    (1, 1),   # 2 rate
    (4, 2),   # 3 channel (freq u16 + flags u16)
    (2, 2),   # 4 FHSS
    (1, 1),   # 5 dBm antenna signal
    (1, 1),   # 6 dBm antenna noise
    (2, 2),   # 7 lock quality
    (2, 2),   # 8 TX attenuation
    (2, 2),   # 9 dB TX attenuation
    (1, 1),   # 10 dBm TX power
    (1, 1),   # 11 antenna
    (1, 1),   # 12 dB antenna signal
    (1, 1),   # 13 dB antenna noise
    (2, 2),   # 14 RX flags
    (2, 2),   # 15 TX flags
    (1, 1),   # 16 RTS retries
    (1, 1),   # 17 data retries
    (4, 4),   # 18 (xchannel, partial)
    (3, 1),   # 19 MCS
    (8, 4),   # 20 A-MPDU status
    (12, 2),  # 21 VHT
    (12, 8),  # 22 timestamp
]

_RT_FLAG_FCS_AT_END = 0x10


def channel_to_freq(channel: int) -> int:
    if channel == 14:
        return 2484
    return 2407 + 5 * channel


def freq_to_channel(freq: int) -> int:
    if freq == 2484:
        return 14
    if 2407 <= freq <= 2472:
        return (freq - 2407) // 5
    if freq >= 5000:
        return (freq - 5000) // 5
    return 0


def strip_radiotap(data: bytes) -> "tuple[bytes, int | None, int | None]":
    """Return (frame, channel, rssi) from a radiotap-led packet."""
    if len(data) < 8:
        raise TruncatedFrame("radiotap header cut short")
    version = data[0]
    if version != 0:
        raise TruncatedFrame(f"radiotap version {version} unknown")
    it_len, = struct.unpack_from("<H", data, 2)
    if it_len < 8 or it_len > len(data):
        raise TruncatedFrame(f"radiotap length {it_len} exceeds packet")

    present_words = []
    pos = 4
    while True:
        if pos + 4 > it_len:
            raise TruncatedFrame("radiotap present bitmask cut short")
        word, = struct.unpack_from("<I", data, pos)
        present_words.append(word)
        pos += 4
        if not word & 1 << 31:
            break

    channel = None
    rssi = None
    strip_fcs = False
    first = present_words[0]
    for bit, (size, align) in enumerate(_RADIOTAP_FIELDS):
        if not first & 1 << bit:
            continue
        pos += -pos % align
        if pos + size > it_len:
            break  # field table ran past the declared header; stop reading
        if bit == 1:
            strip_fcs = bool(data[pos] & _RT_FLAG_FCS_AT_END)
        elif bit == 3:
            freq, = struct.unpack_from("<H", data, pos)
            channel = freq_to_channel(freq)
        elif bit == 5:
            rssi = struct.unpack_from("<b", data, pos)[0]
        pos += size

    frame = data[it_len:]
    if strip_fcs:
        if len(frame) < 4:
            raise TruncatedFrame("radiotap promises an FCS the packet lacks")
        frame = frame[:-4]
    return frame, channel, rssi


def build_radiotap(frame: bytes, channel: int, rssi_dbm: "int | None") -> bytes:
    present = 1 << 1 | 1 << 3  # flags, channel
    if rssi_dbm is not None:
        present |= 1 << 5
    body = bytes([0])  # flags: no FCS appended
    body += b"\x00"  # pad channel to 2-byte alignment (offset 10)
    body += struct.pack("<HH", channel_to_freq(channel), 0x0080)
    if rssi_dbm is not None:
        body += struct.pack("<b", rssi_dbm)
    header = struct.pack("<BBHI", 0, 0, 8 + len(body), present)
    return header + body + frame


# ------------------------------------------------------- BLE pseudo-header

_BLE_PHDR = struct.Struct("<BbbBIH")
_BLE_FLAG_DEWHITENED = 0x0001
_BLE_FLAG_SIGNAL_VALID = 0x0002


def ll_channel_to_rf(channel: int) -> int:
    if channel == 37:
        return 0
    if channel == 38:
        return 12
    if channel == 39:
        return 39
    if 0 <= channel <= 10:
        return channel + 1
    if 11 <= channel <= 36:
        return channel + 2
    raise ValueError(f"no RF channel for LL channel {channel}")


def rf_channel_to_ll(rf: int) -> int:
    if rf == 0:
        return 37
    if rf == 12:
        return 38
    if rf == 39:
        return 39
    if 1 <= rf <= 11:
        return rf - 1
    if 13 <= rf <= 38:
        return rf - 2
    raise ValueError(f"no LL channel for RF channel {rf}")


def build_ble_phdr(frame: bytes, channel: int, rssi_dbm: "int | None") -> bytes:
    flags = _BLE_FLAG_DEWHITENED
    signal = 0
    if rssi_dbm is not None:
        flags |= _BLE_FLAG_SIGNAL_VALID
        signal = rssi_dbm
    phdr = _BLE_PHDR.pack(ll_channel_to_rf(channel), signal, 0, 0, 0, flags)
    return phdr + frame


def strip_ble_phdr(data: bytes) -> "tuple[bytes, int, int | None]":
    if len(data) < _BLE_PHDR.size:
        raise TruncatedFrame("BLE pseudo-header cut short")
    rf, signal, _noise, _offenses, _ref_aa, flags = _BLE_PHDR.unpack_from(data)
    rssi = signal if flags & _BLE_FLAG_SIGNAL_VALID else None
    return data[_BLE_PHDR.size:], rf_channel_to_ll(rf), rssi


# ------------------------------------------------------- 802.15.4 TAP

_TAP_FCS_TYPE = 0
_TAP_RSS = 1
_TAP_CHANNEL = 3


def _tap_tlv(tlv_type: int, value: bytes) -> bytes:
    pad = -len(value) % 4
    return struct.pack("<HH", tlv_type, len(value)) + value + bytes(pad)


def build_zigbee_tap(frame: bytes, channel: int, rssi_dbm: "int | None") -> bytes:
    tlvs = _tap_tlv(_TAP_FCS_TYPE, bytes([1]))  # CRC-16 FCS present
    if rssi_dbm is not None:
        tlvs += _tap_tlv(_TAP_RSS, struct.pack("<f", float(rssi_dbm)))
    tlvs += _tap_tlv(_TAP_CHANNEL, struct.pack("<HB", channel, 0))
    header = struct.pack("<BBH", 0, 0, 4 + len(tlvs))
    return header + tlvs + frame


def strip_zigbee_tap(data: bytes) -> "tuple[bytes, int | None, int | None]":
    if len(data) < 4:
        raise TruncatedFrame("802.15.4 TAP header cut short")
    version, _reserved, hdr_len = struct.unpack_from("<BBH", data)
    if version != 0:
        raise TruncatedFrame(f"802.15.4 TAP version {version} unknown")
    if hdr_len < 4 or hdr_len > len(data) or hdr_len % 4:
        raise TruncatedFrame(f"802.15.4 TAP length {hdr_len} is impossible")

    channel = None
    rssi = None
    fcs_type = 1
    pos = 4
    while pos + 4 <= hdr_len:
        tlv_type, tlv_len = struct.unpack_from("<HH", data, pos)
        value = data[pos + 4 : pos + 4 + tlv_len]
        if len(value) < tlv_len:
            raise TruncatedFrame("802.15.4 TAP TLV overruns header")
        if tlv_type == _TAP_FCS_TYPE and tlv_len >= 1:
            fcs_type = value[0]
        elif tlv_type == _TAP_RSS and tlv_len >= 4:
            rssi = round(struct.unpack("<f", value[:4])[0])
        elif tlv_type == _TAP_CHANNEL and tlv_len >= 2:
            channel, = struct.unpack("<H", value[:2])
        pos += 4 + tlv_len + (-tlv_len % 4)

    frame = data[hdr_len:]
    if fcs_type == 0:
        # normalize to FCS-present form so length accounting stays uniform
        from ..frames.build import fcs

        frame += fcs(frame)
    return frame, channel, rssi


# ------------------------------------------------------------ containers


class PcapWriter:
    def __init__(self, path, link_type: int):
        self.link_type = link_type
        self._fh = open(path, "wb")
        self._fh.write(_GLOBAL_HDR.pack(PCAP_MAGIC, 2, 4, 0, 0, 65535, link_type))

    def write_packet(self, ts_us: int, data: bytes) -> None:
        self._fh.write(_PKT_HDR.pack(ts_us // 1_000_000, ts_us % 1_000_000,
                                     len(data), len(data)))
        self._fh.write(data)

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


class PcapReader:
    """Iterates (timestamp_us, packet_bytes) out of a classic pcap file."""

    def __init__(self, path):
        self._fh = open(path, "rb")
        head = self._fh.read(_GLOBAL_HDR.size)
        if len(head) < _GLOBAL_HDR.size:
            raise CorruptFile("file shorter than a pcap global header")
        magic_le, = struct.unpack_from("<I", head)
        if magic_le == PCAP_MAGIC:
            self._endian = "<"
        elif struct.unpack_from(">I", head)[0] == PCAP_MAGIC:
            self._endian = ">"
        else:
            raise CorruptFile(f"bad pcap magic {magic_le:#010x}")
        fields = struct.unpack(self._endian + "IHHiIII", head)
        self.snaplen = fields[5]
        self.link_type = fields[6]

    def __iter__(self):
        pkt_hdr = struct.Struct(self._endian + "IIII")
        while True:
            head = self._fh.read(pkt_hdr.size)
            if not head:
                return
            if len(head) < pkt_hdr.size:
                raise CorruptFile("packet header cut short")
            ts_sec, ts_frac, incl_len, orig_len = pkt_hdr.unpack(head)
            if incl_len > max(self.snaplen, 0x40000):
                raise CorruptFile(f"packet claims {incl_len} bytes")
            data = self._fh.read(incl_len)
            if len(data) < incl_len:
                raise CorruptFile("packet body cut short")
            yield ts_sec * 1_000_000 + ts_frac, data

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


# ------------------------------------------------------------ glue


def packet_to_record(
    link_type: int,
    ts_us: int,
    data: bytes,
    *,
    channel_hint: "int | None" = None,
) -> FrameRecord:
    """Decode one pcap packet into a FrameRecord.

    Raises FrameParseError subclasses for per-packet problems and
    UnsupportedLinkType when the whole file is unreadable.
    """
    if link_type == LINKTYPE_RADIOTAP:
        frame, channel, rssi = strip_radiotap(data)
        if channel is None:
            channel = channel_hint if channel_hint is not None else 0
        return wifi.parse(frame, CaptureMeta(ts_us, channel, rssi))
    if link_type == LINKTYPE_IEEE802_11:
        channel = channel_hint if channel_hint is not None else 0
        return wifi.parse(data, CaptureMeta(ts_us, channel, None))
    if link_type == LINKTYPE_BLE_LL_PHDR:
        frame, channel, rssi = strip_ble_phdr(data)
        return ble.parse(frame, CaptureMeta(ts_us, channel, rssi))
    if link_type == LINKTYPE_BLE_LL:
        channel = channel_hint
        if channel is None:
            if len(data) >= 4 and struct.unpack_from("<I", data)[0] == ble.ADVERTISING_ACCESS_ADDRESS:
                channel = 37
            else:
                channel = 0
        return ble.parse(data, CaptureMeta(ts_us, channel, None))
    if link_type == LINKTYPE_IEEE802_15_4_TAP:
        frame, channel, rssi = strip_zigbee_tap(data)
        if channel is None:
            channel = channel_hint if channel_hint is not None else 0
        return zigbee.parse(frame, CaptureMeta(ts_us, channel, rssi))
    if link_type == LINKTYPE_IEEE802_15_4_FCS:
        channel = channel_hint if channel_hint is not None else 0
        return zigbee.parse(data, CaptureMeta(ts_us, channel, None))
    raise UnsupportedLinkType(f"link type {link_type} is not supported")


def record_to_packet(record: FrameRecord) -> "tuple[int, bytes]":
    """Encode a FrameRecord back to (link_type, packet_bytes)."""
    if not record.raw:
        raise ValueError("record carries no raw frame bytes to write")
    if record.protocol == model.WIFI:
        return LINKTYPE_RADIOTAP, build_radiotap(
            record.raw, record.channel, record.rssi_dbm
        )
    if record.protocol == model.BLE:
        return LINKTYPE_BLE_LL_PHDR, build_ble_phdr(
            record.raw, record.channel, record.rssi_dbm
        )
    if record.protocol == model.ZIGBEE:
        return LINKTYPE_IEEE802_15_4_TAP, build_zigbee_tap(
            record.raw, record.channel, record.rssi_dbm
        )
    raise ValueError(f"unknown protocol {record.protocol!r}")


def write_capture(path, records) -> int:
    """Write FrameRecords to a pcap file; one protocol per file.

    Returns the packet count. Raises MixedLinkTypes if the records would
    need different link types, before anything is written.
    """
    records = list(records)
    if not records:
        raise ValueError("nothing to write")
    link_types = {WRITE_LINK_TYPE[r.protocol] for r in records}
    if len(link_types) > 1:
        raise MixedLinkTypes(
            f"records span link types {sorted(link_types)}; write one file per protocol"
        )
    with PcapWriter(path, link_types.pop()) as writer:
        for record in records:
            _, data = record_to_packet(record)
            writer.write_packet(record.timestamp_us, data)
    return len(records)
