"""Bluetooth LE link-layer PDU parsing.

Input starts at the access address (4 bytes little-endian), followed by the
2-byte PDU header and payload; preamble and CRC are gone. The capture
channel decides how the header is read: 37-39 are advertising channels,
0-36 carry connection data.

On-air addresses are little-endian; they are reversed here so src/dst print
the usual way. The LLData of a CONNECT_REQ is kept on the record so
connection tracking can follow the hop sequence later.
"""

import struct

from ..errors import BadLength, MalformedElement, TruncatedFrame
from . import model
from .address import format_mac

ADVERTISING_ACCESS_ADDRESS = 0x8E89BED6

PDU_ADV_IND = 0
PDU_ADV_DIRECT_IND = 1
PDU_ADV_NONCONN_IND = 2
PDU_SCAN_REQ = 3
PDU_SCAN_RESP = 4
PDU_CONNECT_REQ = 5
PDU_ADV_SCAN_IND = 6

AD_NAME_SHORT = 0x08
AD_NAME_COMPLETE = 0x09

# payload shapes: sender address first; some carry a second address
_SINGLE_ADDR_WITH_AD = (PDU_ADV_IND, PDU_ADV_NONCONN_IND, PDU_ADV_SCAN_IND)
_TWO_ADDR = {
    PDU_ADV_DIRECT_IND: "target",
    PDU_SCAN_REQ: "advertiser",
    PDU_CONNECT_REQ: "advertiser",
}

_LLID_KINDS = {
    0: (model.DATA, "reserved"),
    1: (model.DATA, "data"),
    2: (model.DATA, "data"),
    3: (model.DATA_CONTROL, "data_control"),
}


def is_advertising_channel(channel: int) -> bool:
    return channel in (37, 38, 39)


def _mac_le(payload: bytes, offset: int) -> str:
    return format_mac(payload[offset : offset + 6][::-1])


def _local_name(ad: bytes) -> "str | None":
    """Scan AD structures for a device name; a complete name wins."""
    name = None
    pos = 0
    while pos < len(ad):
        length = ad[pos]
        if length == 0:
            break  # padding
        if pos + 1 + length > len(ad):
            raise MalformedElement(
                f"AD structure at {pos} length {length} overruns payload"
            )
        ad_type = ad[pos + 1]
        body = ad[pos + 2 : pos + 1 + length]
        if ad_type == AD_NAME_COMPLETE:
            return body.decode("utf-8", errors="replace")
        if ad_type == AD_NAME_SHORT and name is None:
            name = body.decode("utf-8", errors="replace")
        pos += 1 + length
    return name


def _parse_connect_req(payload: bytes) -> model.ConnectionParams:
    if len(payload) < 34:
        raise TruncatedFrame(
            f"CONNECT_REQ needs 34 payload bytes, got {len(payload)}"
        )
    access_address, = struct.unpack_from("<I", payload, 12)
    crc_init = int.from_bytes(payload[16:19], "little")
    window_size = payload[19]
    window_offset, interval, latency, timeout = struct.unpack_from(
        "<HHHH", payload, 20
    )
    channel_map = int.from_bytes(payload[28:33], "little") & (1 << 37) - 1
    hop_sca = payload[33]
    return model.ConnectionParams(
        access_address=access_address,
        crc_init=crc_init,
        window_size=window_size,
        window_offset=window_offset,
        interval=interval,
        latency=latency,
        timeout=timeout,
        channel_map=channel_map,
        hop_increment=hop_sca & 0x1F,
        sleep_clock_accuracy=hop_sca >> 5,
    )


def parse(raw: bytes, meta: model.CaptureMeta) -> model.FrameRecord:
    if len(raw) < 6:
        raise TruncatedFrame(f"{len(raw)} bytes cannot hold access address + header")

    access_address, = struct.unpack_from("<I", raw, 0)
    header = raw[4]
    declared = raw[5]
    payload = raw[6:]
    if declared != len(payload):
        raise BadLength(
            f"length byte says {declared}, {len(payload)} payload bytes present"
        )

    rec = model.FrameRecord(
        protocol=model.BLE,
        timestamp_us=meta.timestamp_us,
        channel=meta.channel,
        rssi_dbm=meta.rssi_dbm,
        length_bytes=len(raw),
        kind=model.ADVERTISING,
        subtype="",
        raw=raw,
    )

    if is_advertising_channel(meta.channel):
        pdu_type = header & 0x0F
        tx_add = header >> 6 & 1
        rec.subtype = model.BLE_ADV_PDU_TYPES.get(pdu_type, f"adv_type_{pdu_type}")

        if pdu_type in _SINGLE_ADDR_WITH_AD or pdu_type in _TWO_ADDR or (
            pdu_type == PDU_SCAN_RESP
        ):
            if len(payload) < 6:
                raise TruncatedFrame("advertising payload lacks sender address")
            rec.src = _mac_le(payload, 0)
            rec.ble_addr_type = model.RANDOM if tx_add else model.PUBLIC

        if pdu_type in _TWO_ADDR:
            if len(payload) < 12:
                raise TruncatedFrame("second address missing from payload")
            rec.dst = _mac_le(payload, 6)

        if pdu_type in _SINGLE_ADDR_WITH_AD:
            rec.ble_local_name = _local_name(payload[6:])
        elif pdu_type == PDU_SCAN_RESP:
            rec.ble_local_name = _local_name(payload[6:])
        elif pdu_type == PDU_CONNECT_REQ:
            rec.connection_params = _parse_connect_req(payload)
            rec.ble_access_address = rec.connection_params.access_address
    else:
        llid = header & 0b11
        rec.kind, rec.subtype = _LLID_KINDS[llid]
        rec.ble_access_address = access_address

    return rec
