"""802.11 MAC frame parsing.

Input is the bare MAC frame as seen in monitor mode: Frame Control first,
no radiotap or other pseudo-header, FCS already stripped. Addressing is
reported exactly as transmitted: dst is Address 1, src is Address 2 when the
frame has one (CTS and ACK do not).
"""

import struct

from ..errors import MalformedElement, TruncatedFrame, UnknownType
from . import model
from .address import format_mac

TYPE_MANAGEMENT = 0
TYPE_CONTROL = 1
TYPE_DATA = 2

SUBTYPE_PROBE_REQ = 4
SUBTYPE_PROBE_RESP = 5
SUBTYPE_BEACON = 8
SUBTYPE_CTS = 12
SUBTYPE_ACK = 13

ELEMENT_SSID = 0
SSID_MAX = 32
HIDDEN_SSID = "<hidden>"

_KIND = {
    TYPE_MANAGEMENT: model.MANAGEMENT,
    TYPE_CONTROL: model.CONTROL,
    TYPE_DATA: model.DATA,
}

_SUBTYPE_NAMES = {
    TYPE_MANAGEMENT: model.WIFI_MGMT_SUBTYPES,
    TYPE_CONTROL: model.WIFI_CTRL_SUBTYPES,
    TYPE_DATA: model.WIFI_DATA_SUBTYPES,
}

# bytes of fixed (non-tagged) fields at the start of the management body
_MGMT_FIXED = {
    SUBTYPE_PROBE_REQ: 0,
    SUBTYPE_PROBE_RESP: 12,  # timestamp 8 + interval 2 + capability 2
    SUBTYPE_BEACON: 12,
}


def _ssid_from_elements(body: bytes) -> "str | None":
    """Walk tagged elements and pull the SSID, if one is present."""
    pos = 0
    while pos + 2 <= len(body):
        eid = body[pos]
        elen = body[pos + 1]
        if pos + 2 + elen > len(body):
            raise MalformedElement(
                f"element {eid} length {elen} overruns frame body"
            )
        if eid == ELEMENT_SSID:
            if elen > SSID_MAX:
                raise MalformedElement(f"ssid length {elen} exceeds {SSID_MAX}")
            if elen == 0:
                return HIDDEN_SSID
            return body[pos + 2 : pos + 2 + elen].decode("utf-8", errors="replace")
        pos += 2 + elen
    return None


def parse(raw: bytes, meta: model.CaptureMeta) -> model.FrameRecord:
    if len(raw) < 10:
        raise TruncatedFrame(f"{len(raw)} bytes is shorter than any 802.11 frame")

    fc0, fc1 = raw[0], raw[1]
    ftype = fc0 >> 2 & 0b11
    subtype = fc0 >> 4 & 0b1111
    if ftype == 3:
        raise UnknownType("frame control type bits 11 are undefined")

    kind = _KIND[ftype]
    subtype_name = _SUBTYPE_NAMES[ftype].get(subtype, f"{kind}_{subtype}")

    to_ds = fc1 & 0x01
    from_ds = fc1 & 0x02

    src = None
    ssid = None
    dst = format_mac(raw[4:10])

    if ftype == TYPE_CONTROL:
        if subtype not in (SUBTYPE_CTS, SUBTYPE_ACK):
            if len(raw) < 16:
                raise TruncatedFrame(f"control subtype {subtype} needs 16 bytes")
            src = format_mac(raw[10:16])
    else:
        header = 24
        if ftype == TYPE_DATA:
            if to_ds and from_ds:
                header += 6  # Address 4
            if subtype & 0b1000:
                header += 2  # QoS Control
        if len(raw) < header:
            raise TruncatedFrame(
                f"type {ftype} subtype {subtype} header needs {header} bytes, "
                f"got {len(raw)}"
            )
        src = format_mac(raw[10:16])

        if ftype == TYPE_MANAGEMENT and subtype in _MGMT_FIXED:
            fixed = _MGMT_FIXED[subtype]
            body = raw[24:]
            if len(body) < fixed:
                raise TruncatedFrame(
                    f"management subtype {subtype} fixed fields need {fixed} bytes"
                )
            ssid = _ssid_from_elements(body[fixed:])
            if subtype == SUBTYPE_PROBE_REQ and ssid == HIDDEN_SSID:
                ssid = None  # zero-length SSID in a probe request means "any"

    return model.FrameRecord(
        protocol=model.WIFI,
        timestamp_us=meta.timestamp_us,
        channel=meta.channel,
        rssi_dbm=meta.rssi_dbm,
        length_bytes=len(raw),
        kind=kind,
        subtype=subtype_name,
        src=src,
        dst=dst,
        ssid=ssid,
        raw=raw,
    )


def sequence_number(raw: bytes) -> "int | None":
    """Sequence field from the MAC header, where the frame has one."""
    ftype = raw[0] >> 2 & 0b11
    if ftype == TYPE_CONTROL or len(raw) < 24:
        return None
    return struct.unpack_from("<H", raw, 22)[0] >> 4
