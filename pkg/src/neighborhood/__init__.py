"""Passive link-layer scanner for WiFi, BLE and Zigbee neighborhoods."""

__version__ = "0.1.0"
