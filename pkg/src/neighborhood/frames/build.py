"""Byte-level frame builders.

The traffic generator and the parser tests both need real frames; these
functions assemble them from field values, doing the reverse of the parsers
(display-order addresses in, little-endian wire bytes out). Builders pad
bodies with zeros to hit a requested over-the-air length, so generated
traffic can match target byte rates exactly.
"""

import struct

from . import model
from .address import parse_mac
from .ble import ADVERTISING_ACCESS_ADDRESS

# ---------------------------------------------------------------- 802.11

_WIFI_HDR = struct.Struct("<BBH6s6s6sH")


def _fc0(ftype: int, subtype: int) -> int:
    return ftype << 2 | subtype << 4


def _wifi_header(
    ftype: int,
    subtype: int,
    a1: str,
    a2: str,
    a3: str,
    *,
    fc1: int = 0,
    seq: int = 0,
) -> bytes:
    return _WIFI_HDR.pack(
        _fc0(ftype, subtype),
        fc1,
        0,
        parse_mac(a1),
        parse_mac(a2),
        parse_mac(a3),
        (seq & 0xFFF) << 4,
    )


def ssid_element(ssid: str) -> bytes:
    body = ssid.encode("utf-8")
    return bytes([0, len(body)]) + body


def supported_rates_element() -> bytes:
    return bytes([1, 8, 0x82, 0x84, 0x8B, 0x96, 0x0C, 0x12, 0x18, 0x24])


def wifi_beacon(src: str, ssid: str, *, seq: int = 0, extra: bytes = b"") -> bytes:
    fixed = struct.pack("<QHH", 0, 100, 0x0431)  # timestamp, interval, capability
    body = fixed + ssid_element(ssid) + supported_rates_element() + extra
    return _wifi_header(0, 8, "ff:ff:ff:ff:ff:ff", src, src, seq=seq) + body


def wifi_probe_resp(src: str, dst: str, ssid: str, *, seq: int = 0) -> bytes:
    fixed = struct.pack("<QHH", 0, 100, 0x0431)
    body = fixed + ssid_element(ssid) + supported_rates_element()
    return _wifi_header(0, 5, dst, src, src, seq=seq) + body


def wifi_probe_req(src: str, ssid: "str | None" = None, *, seq: int = 0) -> bytes:
    body = ssid_element(ssid if ssid is not None else "")
    body += supported_rates_element()
    return _wifi_header(0, 4, "ff:ff:ff:ff:ff:ff", src, "ff:ff:ff:ff:ff:ff", seq=seq) + body


def wifi_data(
    src: str,
    dst: str,
    *,
    bssid: "str | None" = None,
    length: "int | None" = None,
    qos: bool = True,
    to_ds: bool = False,
    from_ds: bool = False,
    seq: int = 0,
) -> bytes:
    subtype = 8 if qos else 0
    fc1 = (0x01 if to_ds else 0) | (0x02 if from_ds else 0)
    head = _wifi_header(2, subtype, dst, src, bssid or src, fc1=fc1, seq=seq)
    if qos:
        head += struct.pack("<H", 0)
    if length is None:
        return head
    if length < len(head):
        raise ValueError(f"length {length} below header size {len(head)}")
    return head + bytes(length - len(head))


def wifi_ack(dst: str) -> bytes:
    return struct.pack("<BBH6s", _fc0(1, 13), 0, 0, parse_mac(dst))


def wifi_cts(dst: str) -> bytes:
    return struct.pack("<BBH6s", _fc0(1, 12), 0, 0, parse_mac(dst))


def wifi_rts(src: str, dst: str) -> bytes:
    return struct.pack("<BBH6s6s", _fc0(1, 11), 0, 0, parse_mac(dst), parse_mac(src))


def wifi_ps_poll(src: str, bssid: str, *, aid: int = 1) -> bytes:
    return struct.pack(
        "<BBH6s6s", _fc0(1, 10), 0, 0xC000 | aid, parse_mac(bssid), parse_mac(src)
    )


# ------------------------------------------------------------------- BLE


def _mac_le(addr: str) -> bytes:
    return parse_mac(addr)[::-1]


def name_ad(name: str, *, complete: bool = True) -> bytes:
    body = name.encode("utf-8")
    return bytes([len(body) + 1, 0x09 if complete else 0x08]) + body


def flags_ad(value: int = 0x06) -> bytes:
    return bytes([2, 0x01, value])


def _ble_pdu(header: int, payload: bytes) -> bytes:
    if len(payload) > 255:
        raise ValueError("BLE payload longer than the length byte allows")
    return (
        struct.pack("<I", ADVERTISING_ACCESS_ADDRESS)
        + bytes([header, len(payload)])
        + payload
    )


def ble_adv(
    pdu_type: int,
    sender: str,
    *,
    random_addr: bool = False,
    target: "str | None" = None,
    target_random: bool = False,
    ad: bytes = b"",
) -> bytes:
    header = pdu_type | (0x40 if random_addr else 0) | (0x80 if target_random else 0)
    payload = _mac_le(sender)
    if target is not None:
        payload += _mac_le(target)
    return _ble_pdu(header, payload + ad)


def ble_adv_ind(
    sender: str,
    *,
    random_addr: bool = False,
    name: "str | None" = None,
    extra_ad: bytes = b"",
) -> bytes:
    ad = flags_ad()
    if name is not None:
        ad += name_ad(name)
    return ble_adv(0, sender, random_addr=random_addr, ad=ad + extra_ad)


def ble_scan_req(
    scanner: str,
    advertiser: str,
    *,
    scanner_random: bool = True,
    advertiser_random: bool = False,
) -> bytes:
    return ble_adv(
        3,
        scanner,
        random_addr=scanner_random,
        target=advertiser,
        target_random=advertiser_random,
    )


def ble_scan_resp(
    advertiser: str, *, random_addr: bool = False, name: "str | None" = None
) -> bytes:
    ad = name_ad(name) if name is not None else b""
    return ble_adv(4, advertiser, random_addr=random_addr, ad=ad)


def ble_connect_req(
    initiator: str,
    advertiser: str,
    params: model.ConnectionParams,
    *,
    initiator_random: bool = True,
    advertiser_random: bool = False,
) -> bytes:
    lldata = struct.pack("<I", params.access_address)
    lldata += params.crc_init.to_bytes(3, "little")
    lldata += struct.pack(
        "<BHHHH",
        params.window_size,
        params.window_offset,
        params.interval,
        params.latency,
        params.timeout,
    )
    lldata += params.channel_map.to_bytes(5, "little")
    lldata += bytes([params.hop_increment & 0x1F | params.sleep_clock_accuracy << 5])
    header = 5 | (0x40 if initiator_random else 0) | (0x80 if advertiser_random else 0)
    return _ble_pdu(header, _mac_le(initiator) + _mac_le(advertiser) + lldata)


def ble_data(
    access_address: int,
    *,
    llid: int = 2,
    payload: "bytes | int" = b"",
    sn: int = 0,
    nesn: int = 0,
    more_data: bool = False,
) -> bytes:
    if isinstance(payload, int):
        payload = bytes(payload)
    if len(payload) > 255:
        raise ValueError("BLE payload longer than the length byte allows")
    header = (llid & 3) | (nesn & 1) << 2 | (sn & 1) << 3 | (0x10 if more_data else 0)
    return (
        struct.pack("<I", access_address) + bytes([header, len(payload)]) + payload
    )


# -------------------------------------------------------------- 802.15.4


def fcs(data: bytes) -> bytes:
    """ITU-T CRC-16 as used for the 802.15.4 FCS (poly 0x8408, reflected)."""
    crc = 0
    for byte in data:
        crc ^= byte
        for _ in range(8):
            crc = (crc >> 1) ^ 0x8408 if crc & 1 else crc >> 1
    return struct.pack("<H", crc)


def _addr_le(addr: "str | None") -> "tuple[int, bytes]":
    if addr is None:
        return 0, b""
    octets = parse_mac(addr)
    if len(octets) == 2:
        return 2, octets[::-1]
    if len(octets) == 8:
        return 3, octets[::-1]
    raise ValueError(f"802.15.4 address must be 2 or 8 octets: {addr!r}")


def zigbee_frame(
    ftype: int,
    *,
    seq: int,
    dst_pan: "int | None" = None,
    dst: "str | None" = None,
    src_pan: "int | None" = None,
    src: "str | None" = None,
    pan_compression: bool = False,
    ack_request: bool = False,
    payload: bytes = b"",
) -> bytes:
    dst_mode, dst_bytes = _addr_le(dst)
    src_mode, src_bytes = _addr_le(src)
    fcf = ftype & 7
    if ack_request:
        fcf |= 0x0020
    if pan_compression:
        fcf |= 0x0040
    fcf |= dst_mode << 10 | src_mode << 14
    out = struct.pack("<HB", fcf, seq & 0xFF)
    if dst_mode:
        out += struct.pack("<H", dst_pan) + dst_bytes
    if src_mode:
        if not (pan_compression and dst_mode):
            out += struct.pack("<H", src_pan)
        out += src_bytes
    out += payload
    return out + fcs(out)


def zigbee_data(
    pan_id: int,
    src: str,
    dst: str,
    *,
    seq: int,
    length: "int | None" = None,
    payload: bytes = b"",
    ack_request: bool = True,
) -> bytes:
    if length is not None:
        base = zigbee_frame(
            1, seq=seq, dst_pan=pan_id, dst=dst, src=src,
            pan_compression=True, ack_request=ack_request,
        )
        if length < len(base):
            raise ValueError(f"length {length} below minimum {len(base)}")
        payload = bytes(length - len(base))
    return zigbee_frame(
        1, seq=seq, dst_pan=pan_id, dst=dst, src=src,
        pan_compression=True, ack_request=ack_request, payload=payload,
    )


def zigbee_ack(seq: int) -> bytes:
    return zigbee_frame(2, seq=seq)


def zigbee_beacon(pan_id: int, src: str, *, seq: int, payload: bytes = b"") -> bytes:
    # superframe spec + GTS none + no pending addresses
    body = struct.pack("<HBB", 0xCFFF, 0, 0) + payload
    return zigbee_frame(0, seq=seq, src_pan=pan_id, src=src, payload=body)


def zigbee_mac_command(
    pan_id: int, src: str, dst: str, *, seq: int, command: int = 4
) -> bytes:
    return zigbee_frame(
        3, seq=seq, dst_pan=pan_id, dst=dst, src=src,
        pan_compression=True, ack_request=True, payload=bytes([command]),
    )
