"""Hardware address formatting and address-class rules.

Canonical text form is lowercase hex octets joined by colons, in display
(big-endian) order. BLE and 802.15.4 carry addresses little-endian on the
air; their parsers reverse the bytes before calling format_mac, so every
address that leaves this package reads the way a packet dissector would
print it.
"""

BROADCAST = "ff:ff:ff:ff:ff:ff"

UNICAST = "unicast"
MULTICAST = "multicast"
BROADCAST_CLASS = "broadcast"


def format_mac(octets: bytes) -> str:
    return ":".join(f"{b:02x}" for b in octets)


def parse_mac(text: str) -> bytes:
    parts = text.split(":")
    if not parts or any(len(p) != 2 for p in parts):
        raise ValueError(f"bad hardware address: {text!r}")
    try:
        return bytes(int(p, 16) for p in parts)
    except ValueError:
        raise ValueError(f"bad hardware address: {text!r}") from None


def classify_address(addr: "bytes | str") -> str:
    """Return unicast / multicast / broadcast for an address of any width.

    EUI-48 and EUI-64 use the I/G bit of the first display octet. 16-bit
    802.15.4 short addresses have no group bit, so anything other than
    0xffff is unicast there.
    """
    octets = parse_mac(addr) if isinstance(addr, str) else bytes(addr)
    if not octets:
        raise ValueError("empty address")
    if all(b == 0xFF for b in octets):
        return BROADCAST_CLASS
    if len(octets) == 2:
        return UNICAST
    if octets[0] & 0x01:
        return MULTICAST
    return UNICAST


def is_unicast(addr: "bytes | str") -> bool:
    return classify_address(addr) == UNICAST
