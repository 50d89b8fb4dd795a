"""Shared frame model: one record shape for all three protocols.

Parsers fill in only the fields their protocol has; everything else stays
None. Kind strings double as the traffic-class key downstream (management /
control / data buckets), see metrics.KIND_CLASS.
"""

from dataclasses import dataclass, field

WIFI = "wifi"
BLE = "ble"
ZIGBEE = "zigbee"

PROTOCOLS = (WIFI, BLE, ZIGBEE)

# frame kinds
MANAGEMENT = "management"
CONTROL = "control"
DATA = "data"
ADVERTISING = "advertising"
DATA_CONTROL = "data_control"
BEACON = "beacon"
ACK = "ack"
MAC_COMMAND = "mac_command"

WIFI_KINDS = frozenset({MANAGEMENT, CONTROL, DATA})
BLE_KINDS = frozenset({ADVERTISING, DATA, DATA_CONTROL})
ZIGBEE_KINDS = frozenset({BEACON, DATA, ACK, MAC_COMMAND})

WIFI_MGMT_SUBTYPES = {
    0: "assoc_req",
    1: "assoc_resp",
    2: "reassoc_req",
    3: "reassoc_resp",
    4: "probe_req",
    5: "probe_resp",
    6: "timing_adv",
    8: "beacon",
    9: "atim",
    10: "disassoc",
    11: "auth",
    12: "deauth",
    13: "action",
    14: "action_no_ack",
}

WIFI_CTRL_SUBTYPES = {
    7: "control_wrapper",
    8: "block_ack_req",
    9: "block_ack",
    10: "ps_poll",
    11: "rts",
    12: "cts",
    13: "ack",
    14: "cf_end",
    15: "cf_end_ack",
}

WIFI_DATA_SUBTYPES = {
    0: "data",
    1: "data_cf_ack",
    2: "data_cf_poll",
    3: "data_cf_ack_poll",
    4: "null",
    5: "cf_ack",
    6: "cf_poll",
    7: "cf_ack_poll",
    8: "qos_data",
    9: "qos_data_cf_ack",
    10: "qos_data_cf_poll",
    11: "qos_data_cf_ack_poll",
    12: "qos_null",
    14: "qos_cf_poll",
    15: "qos_cf_ack_poll",
}

BLE_ADV_PDU_TYPES = {
    0: "adv_ind",
    1: "adv_direct_ind",
    2: "adv_nonconn_ind",
    3: "scan_req",
    4: "scan_resp",
    5: "connect_req",
    6: "adv_scan_ind",
    7: "adv_ext_ind",
    8: "aux_connect_rsp",
}

ZIGBEE_TYPES = {0: BEACON, 1: DATA, 2: ACK, 3: MAC_COMMAND}

PUBLIC = "public"
RANDOM = "random"


@dataclass(frozen=True)
class CaptureMeta:
    """Receiver-side facts that do not live inside the frame bytes."""

    timestamp_us: int
    channel: int
    rssi_dbm: "int | None" = None


@dataclass(frozen=True)
class ConnectionParams:
    """LLData carried by a BLE CONNECT_REQ; enough to follow the hop pattern."""

    access_address: int
    crc_init: int
    window_size: int
    window_offset: int
    interval: int
    latency: int
    timeout: int
    channel_map: int  # 37-bit mask, bit k = data channel k in use
    hop_increment: int
    sleep_clock_accuracy: int

    def channels(self) -> "list[int]":
        return [k for k in range(37) if self.channel_map >> k & 1]


@dataclass
class FrameRecord:
    """One decoded frame plus its capture context.

    src/dst hold formatted addresses or None when the frame kind carries no
    such field (CTS, BLE data PDUs, Zigbee acks). length_bytes is the full
    over-the-air MAC frame length, pseudo-headers excluded.
    """

    protocol: str
    timestamp_us: int
    channel: int
    rssi_dbm: "int | None"
    length_bytes: int
    kind: str
    subtype: str
    src: "str | None" = None
    dst: "str | None" = None
    ssid: "str | None" = None
    ble_addr_type: "str | None" = None
    ble_local_name: "str | None" = None
    ble_access_address: "int | None" = None
    pan_id: "int | None" = None
    connection_params: "ConnectionParams | None" = None
    raw: bytes = field(default=b"", repr=False)
