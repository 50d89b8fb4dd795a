"""Command-line front end.

generate   synthesize a scenario to pcap/JSONL/store/HTTP, with labels
replay     push a capture through parsing, hop filtering and delivery
serve      run the storage HTTP service (and the console, if built)
analyze    per-node stats and camera/AP/gateway calls over stored frames
calibrate  refit the camera band from labeled measurements

Exit codes: 0 success, 1 runtime failure, 2 usage.
"""

import argparse
import json
import os
import sys

from . import analyzer, classify
from .capture import pcapio, replay, scenario, schedule
from .errors import (
    CorruptFile,
    InvalidConfig,
    InvalidSpec,
    MixedLinkTypes,
    SinkUnavailable,
    UnsupportedLinkType,
)

DEFAULT_DB = "neighborhood.db"


def _db_path(value: "str | None") -> str:
    return value or os.environ.get("NEIGHBORHOOD_DB") or DEFAULT_DB


def _open_store(path):
    from .storage import FrameStore

    return FrameStore(path)


# --------------------------------------------------------------- outputs


def _emit_jsonl(infos, path: str) -> None:
    fh = sys.stdout if path == "-" else open(path, "w", encoding="utf-8")
    try:
        for info in infos:
            fh.write(json.dumps(info.to_wire(), sort_keys=True) + "\n")
    finally:
        if fh is not sys.stdout:
            fh.close()


def _emit_pcap(records, path: str) -> "list[str]":
    """One file per protocol; the protocol tags the name when mixed."""
    by_proto: "dict[str, list]" = {}
    for rec in records:
        by_proto.setdefault(rec.protocol, []).append(rec)
    written = []
    for proto, group in sorted(by_proto.items()):
        if len(by_proto) == 1:
            target = path
        else:
            base, dot, suffix = path.rpartition(".")
            target = f"{base}.{proto}.{suffix}" if dot else f"{path}.{proto}"
        pcapio.write_capture(target, group)
        written.append(target)
    return written


def _deliver(infos, sink, source_id: str, spool_path=None) -> "tuple[int, int]":
    pipeline = analyzer.DeliveryPipeline(sink, source_id, overflow_path=spool_path)
    for info in infos:
        pipeline.feed(info)
    pipeline.flush()
    return pipeline.delivered, pipeline.spooled


def _truth_doc(truth: "scenario.GroundTruth") -> dict:
    return {
        "roles": truth.roles,
        "names": truth.names,
        "ssids": truth.ssids,
        "links": [list(pair) for pair in sorted(truth.links)],
        "ble_sessions": truth.ble_sessions,
        "pan_id": truth.pan_id,
    }


# -------------------------------------------------------------- commands


def _cmd_generate(args) -> int:
    if args.spec:
        spec = scenario.ScenarioSpec.from_file(args.spec)
    else:
        spec = scenario.PRESETS[args.preset]()
    if args.seed is not None:
        spec.seed = args.seed
    if args.duration is not None:
        spec.duration_s = args.duration

    records, truth = scenario.generate_scenario(spec)
    infos = [analyzer.extract(rec) for rec in records]
    source_id = args.source_id or f"gen-{spec.seed}"

    wrote_something = False
    if args.out:
        for target in _emit_pcap(records, args.out):
            print(f"wrote {target}", file=sys.stderr)
        wrote_something = True
    if args.labels:
        with open(args.labels, "w", encoding="utf-8") as fh:
            json.dump(_truth_doc(truth), fh, indent=2, sort_keys=True)
        print(f"wrote {args.labels}", file=sys.stderr)
    if args.db:
        with _open_store(args.db) as store:
            delivered, _ = _deliver(infos, analyzer.StoreSink(store), source_id)
        print(f"stored {delivered} frames in {args.db}", file=sys.stderr)
        wrote_something = True
    if args.sink:
        sink = analyzer.HttpSink(args.sink)
        delivered, spooled = _deliver(infos, sink, source_id, args.spool)
        print(f"delivered {delivered} frames to {args.sink}"
              + (f", spooled {spooled}" if spooled else ""), file=sys.stderr)
        wrote_something = True
    if args.jsonl or not wrote_something:
        _emit_jsonl(infos, args.jsonl or "-")

    print(f"generated {len(records)} frames from {len(spec.devices)} devices "
          f"(seed {spec.seed}, {spec.duration_s:g}s)", file=sys.stderr)
    return 0


def _build_schedule(args) -> "schedule.HopSchedule | None":
    if not args.channels:
        return None
    channels = [int(c) for c in args.channels.split(",") if c.strip()]
    config = schedule.ScanConfig(
        protocol=args.protocol,
        channels=channels,
        dwell_s=args.dwell,
        hops=args.hops,
    )
    return schedule.build_hop_schedule(config)


def _cmd_replay(args) -> int:
    sched = _build_schedule(args)
    stats = replay.ReplayStats()
    records = list(
        replay.replay_capture(
            args.capture,
            schedule=sched,
            channel_hint=args.channel_hint,
            stats=stats,
        )
    )
    infos = [analyzer.extract(rec) for rec in records]
    source_id = args.source_id or f"replay-{os.path.basename(args.capture)}"

    sent_anywhere = False
    if args.db:
        with _open_store(args.db) as store:
            delivered, _ = _deliver(infos, analyzer.StoreSink(store), source_id)
        print(f"stored {delivered} frames in {args.db}", file=sys.stderr)
        sent_anywhere = True
    if args.sink:
        delivered, spooled = _deliver(
            infos, analyzer.HttpSink(args.sink), source_id, args.spool
        )
        print(f"delivered {delivered} frames to {args.sink}"
              + (f", spooled {spooled}" if spooled else ""), file=sys.stderr)
        sent_anywhere = True
    if args.jsonl or not sent_anywhere:
        _emit_jsonl(infos, args.jsonl or "-")

    print(
        f"read {stats.packets_read} packets: emitted {stats.emitted}, "
        f"filtered {stats.filtered_out}, parse failures {stats.parse_failures}, "
        f"out of order {stats.out_of_order}",
        file=sys.stderr,
    )
    return 0


def _cmd_serve(args) -> int:
    from .storage.api import serve

    store = _open_store(_db_path(args.db))
    frontend = args.frontend
    if frontend is None:
        candidate = os.path.join(os.getcwd(), "frontend", "dist")
        frontend = candidate if os.path.isdir(candidate) else None
    print(f"serving {store.path} on http://{args.host}:{args.port}", file=sys.stderr)
    serve(store, host=args.host, port=args.port, frontend_dir=frontend)
    return 0


def _load_infos(args) -> "list[analyzer.FrameInfo]":
    if args.jsonl or args.stdin:
        fh = sys.stdin if args.stdin else open(args.jsonl, "r", encoding="utf-8")
        try:
            return [
                analyzer.FrameInfo.from_wire(json.loads(line))
                for line in fh
                if line.strip()
            ]
        finally:
            if fh is not sys.stdin:
                fh.close()
    with _open_store(_db_path(args.db)) as store:
        return store.frames_as_infos(from_us=args.from_us, to_us=args.to_us)


def _band_from_args(args) -> "classify.CameraBand | None":
    flags = (args.r_sr_min, args.r_sr_max, args.r_bf_min, args.r_bf_max)
    if all(v is None for v in flags):
        return None
    band = classify.CameraBand()
    for name, value in zip(("r_sr_min", "r_sr_max", "r_bf_min", "r_bf_max"), flags):
        if value is not None:
            setattr(band, name, value)
    band.validate()
    return band


def _render_text(doc: dict) -> str:
    lines = []
    window = doc["window"]
    lines.append(
        f"window: {window['from_us']}..{window['to_us']} us, {window['frames']} frames"
    )
    header = (
        f"{'address':<24} {'proto':<6} {'frames':>7} {'bytes':>10} "
        f"{'r_sr':>8} {'r_bf':>8} {'label':<7} role"
    )
    lines.append(header)
    lines.append("-" * len(header))
    for node in doc["nodes"]:
        r_sr = "-" if node["r_sr"] is None else f"{node['r_sr']:.2f}"
        r_bf = "-" if node["r_bf"] is None else f"{node['r_bf']:.1f}"
        lines.append(
            f"{node['address']:<24} {node['protocol']:<6} "
            f"{node['frames_total']:>7} {node['bytes_total']:>10} "
            f"{r_sr:>8} {r_bf:>8} {node['label']:<7} {node['role'] or ''}"
        )
    lines.append(f"links: {len(doc['links'])}")
    for ap in doc["access_points"]:
        ssids = ", ".join(doc["ssids"].get(ap, [])) or "?"
        lines.append(f"access point {ap} ({ssids})")
    if doc["gateway"]:
        lines.append(f"gateway {doc['gateway']}")
    for addr in doc["cameras"]:
        lines.append(f"camera {addr}")
    for conn in doc["ble_connections"]:
        chs = conn["mapped_channels"]
        mapped = f"{len(chs)} mapped" if chs is not None else "no connect_req seen"
        lines.append(
            f"ble connection {conn['access_address']}: "
            f"{conn['data_frames']} data / {conn['control_frames']} control frames, "
            f"{len(conn['channels_seen'])} channels seen ({mapped})"
        )
    return "\n".join(lines)


def _cmd_analyze(args) -> int:
    infos = _load_infos(args)
    doc = classify.classify_window(infos, band=_band_from_args(args))
    if args.format == "json":
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(_render_text(doc))
    return 0


def _cmd_calibrate(args) -> int:
    samples = []
    for text in args.sample or []:
        parts = text.split(",")
        if len(parts) != 2:
            raise InvalidConfig(f"--sample wants R_SR,R_BF, got {text!r}")
        samples.append((float(parts[0]), float(parts[1])))
    if args.cameras:
        addresses = [a.strip() for a in args.cameras.split(",") if a.strip()]
        with _open_store(_db_path(args.db)) as store:
            stats = store.node_stats(from_us=args.from_us, to_us=args.to_us)
        for addr in addresses:
            if addr not in stats:
                raise InvalidConfig(f"no frames from {addr} in the window")
            entry = stats[addr]
            if entry.r_sr is None or entry.r_bf is None:
                raise InvalidConfig(f"{addr} moved no data; cannot sample it")
            samples.append((float(entry.r_sr), float(entry.r_bf)))
    band = classify.calibrate_band(samples)
    print(json.dumps(band.to_doc(), indent=2, sort_keys=True))
    return 0


# ----------------------------------------------------------------- wiring


def _add_window_args(p) -> None:
    p.add_argument("--from", dest="from_us", type=int, default=None,
                   help="window start, microseconds inclusive")
    p.add_argument("--to", dest="to_us", type=int, default=None,
                   help="window end, microseconds exclusive")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="neighborhood",
        description="Passive link-layer scanner toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="synthesize a labeled scenario")
    g.add_argument("--preset", choices=sorted(scenario.PRESETS), default="high_load")
    g.add_argument("--spec", help="scenario INI file (overrides --preset)")
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--duration", type=float, default=None, help="seconds")
    g.add_argument("--out", help="pcap path (per-protocol suffix when mixed)")
    g.add_argument("--jsonl", help="wire-format JSON lines path, - for stdout")
    g.add_argument("--db", help="store frames into this SQLite file")
    g.add_argument("--sink", help="POST frames to this base URL")
    g.add_argument("--spool", help="overflow JSONL path for failed delivery")
    g.add_argument("--labels", help="write ground-truth labels JSON here")
    g.add_argument("--source-id", default=None)
    g.set_defaults(func=_cmd_generate)

    r = sub.add_parser("replay", help="replay a pcap through the pipeline")
    r.add_argument("capture", help="pcap file")
    r.add_argument("--channels", help="hop list, e.g. 1,6,11 (enables filtering)")
    r.add_argument("--dwell", type=float, default=schedule.DEFAULT_DWELL_S,
                   help="seconds per hop segment")
    r.add_argument("--hops", type=int, default=None, help="number of segments")
    r.add_argument("--protocol", choices=("wifi", "ble", "zigbee"), default="wifi",
                   help="protocol the hop plan is for")
    r.add_argument("--channel-hint", type=int, default=None,
                   help="channel for link types that do not carry one")
    r.add_argument("--jsonl", help="wire-format JSON lines path, - for stdout")
    r.add_argument("--db", help="store frames into this SQLite file")
    r.add_argument("--sink", help="POST frames to this base URL")
    r.add_argument("--spool", help="overflow JSONL path for failed delivery")
    r.add_argument("--source-id", default=None)
    r.set_defaults(func=_cmd_replay)

    s = sub.add_parser("serve", help="run the HTTP service")
    s.add_argument("--db", default=None,
                   help=f"SQLite path (default $NEIGHBORHOOD_DB or {DEFAULT_DB})")
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument("--port", type=int, default=8787)
    s.add_argument("--frontend", default=None, help="built console directory")
    s.set_defaults(func=_cmd_serve)

    a = sub.add_parser("analyze", help="stats and classification over frames")
    a.add_argument("--db", default=None)
    a.add_argument("--jsonl", help="read wire-format JSON lines instead")
    a.add_argument("--stdin", action="store_true", help="read JSON lines from stdin")
    _add_window_args(a)
    a.add_argument("--r-sr-min", type=float, default=None)
    a.add_argument("--r-sr-max", type=float, default=None)
    a.add_argument("--r-bf-min", type=float, default=None)
    a.add_argument("--r-bf-max", type=float, default=None)
    a.add_argument("--format", choices=("text", "json"), default="text")
    a.set_defaults(func=_cmd_analyze)

    c = sub.add_parser("calibrate", help="fit the camera band from samples")
    c.add_argument("--sample", action="append",
                   help="R_SR,R_BF pair from a known camera (repeatable)")
    c.add_argument("--db", default=None)
    c.add_argument("--cameras", help="comma-separated camera addresses in the db")
    _add_window_args(c)
    c.set_defaults(func=_cmd_calibrate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        InvalidConfig,
        InvalidSpec,
        CorruptFile,
        UnsupportedLinkType,
        MixedLinkTypes,
        SinkUnavailable,
        FileNotFoundError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
