"""IEEE 802.15.4 MAC parsing (the link layer under Zigbee).

Input is the full MAC frame as captured, including the trailing 2-byte FCS;
length_bytes counts it, the field reader skips it. Short addresses print as
two octets ("1a:62"), extended ones as a full EUI-64, both reversed out of
their little-endian wire order.
"""

import struct

from ..errors import ReservedFrameType, TruncatedFrame
from . import model
from .address import format_mac

FCS_LEN = 2

ADDR_NONE = 0
ADDR_SHORT = 2
ADDR_EXTENDED = 3

_ADDR_WIDTH = {ADDR_SHORT: 2, ADDR_EXTENDED: 8}


class _Cursor:
    def __init__(self, body: bytes):
        self.body = body
        self.pos = 0

    def take(self, n: int, what: str) -> bytes:
        if self.pos + n > len(self.body):
            raise TruncatedFrame(f"frame ends inside {what}")
        piece = self.body[self.pos : self.pos + n]
        self.pos += n
        return piece


def parse(raw: bytes, meta: model.CaptureMeta) -> model.FrameRecord:
    if len(raw) < 3 + FCS_LEN:
        raise TruncatedFrame(f"{len(raw)} bytes cannot hold FC, sequence and FCS")

    body = raw[:-FCS_LEN]
    cur = _Cursor(body)
    fcf, = struct.unpack("<H", cur.take(2, "frame control"))
    cur.take(1, "sequence number")

    ftype = fcf & 0b111
    if ftype not in model.ZIGBEE_TYPES:
        raise ReservedFrameType(f"frame type {ftype} is reserved")
    pan_compression = bool(fcf & 0x0040)
    dst_mode = fcf >> 10 & 0b11
    src_mode = fcf >> 14 & 0b11
    if dst_mode == 1 or src_mode == 1:
        raise ReservedFrameType("addressing mode 1 is reserved")

    dst = None
    src = None
    dst_pan = None
    src_pan = None

    if dst_mode != ADDR_NONE:
        dst_pan, = struct.unpack("<H", cur.take(2, "destination PAN"))
        width = _ADDR_WIDTH[dst_mode]
        dst = format_mac(cur.take(width, "destination address")[::-1])
    if src_mode != ADDR_NONE:
        if not (pan_compression and dst_mode != ADDR_NONE):
            src_pan, = struct.unpack("<H", cur.take(2, "source PAN"))
        width = _ADDR_WIDTH[src_mode]
        src = format_mac(cur.take(width, "source address")[::-1])

    pan_id = dst_pan if dst_pan is not None else src_pan
    kind = model.ZIGBEE_TYPES[ftype]

    return model.FrameRecord(
        protocol=model.ZIGBEE,
        timestamp_us=meta.timestamp_us,
        channel=meta.channel,
        rssi_dbm=meta.rssi_dbm,
        length_bytes=len(raw),
        kind=kind,
        subtype=kind,
        src=src,
        dst=dst,
        pan_id=pan_id,
        raw=raw,
    )


def sequence_number(raw: bytes) -> int:
    return raw[2]
