"""Replay captured files through the same path live capture would take.

A replayed file behaves like an antenna: frames come out in timestamp
order, frames the hop schedule says the radio was not listening to are
dropped, and undecodable packets are counted rather than raised.
"""

import time
from dataclasses import dataclass

from ..errors import FrameParseError, UnsupportedLinkType
from . import pcapio
from .schedule import HopSchedule


@dataclass
class ReplayStats:
    packets_read: int = 0
    emitted: int = 0
    filtered_out: int = 0
    parse_failures: int = 0
    out_of_order: int = 0


def replay_capture(
    path,
    *,
    schedule: "HopSchedule | None" = None,
    channel_hint: "int | None" = None,
    pace: bool = False,
    stats: "ReplayStats | None" = None,
    sleep=time.sleep,
):
    """Yield FrameRecords from a pcap file in timestamp order.

    schedule, when given, keeps only frames a hopping radio would have
    heard; segment offsets count from the first packet in the file. pace
    sleeps out the original inter-frame gaps (rarely wanted in tests).
    stats, if provided, is filled in as a side channel.
    """
    if stats is None:
        stats = ReplayStats()

    with pcapio.PcapReader(path) as reader:
        if reader.link_type not in pcapio.READ_LINK_TYPES:
            raise UnsupportedLinkType(
                f"link type {reader.link_type} is not supported"
            )
        records = []
        last_ts = None
        for ts_us, data in reader:
            stats.packets_read += 1
            if last_ts is not None and ts_us < last_ts:
                stats.out_of_order += 1
            last_ts = ts_us
            try:
                records.append(
                    pcapio.packet_to_record(
                        reader.link_type, ts_us, data, channel_hint=channel_hint
                    )
                )
            except FrameParseError:
                stats.parse_failures += 1

    records.sort(key=lambda r: r.timestamp_us)
    t0 = records[0].timestamp_us if records else 0

    prev_ts = t0
    for record in records:
        if schedule is not None:
            offset_s = (record.timestamp_us - t0) / 1e6
            if not schedule.contains(record.channel, offset_s):
                stats.filtered_out += 1
                continue
        if pace and record.timestamp_us > prev_ts:
            sleep((record.timestamp_us - prev_ts) / 1e6)
        prev_ts = record.timestamp_us
        stats.emitted += 1
        yield record
