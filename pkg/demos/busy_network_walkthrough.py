#!/usr/bin/env python3
"""Walk one busy 2.4 GHz neighborhood from raw frames to device calls.

Generates a seeded scenario (an AP, its upstream router, three streaming
cameras, a speaker, a laptop), aggregates per-node traffic, and shows how
the two ratios plus two structural rules recover every role without
touching a single payload byte.

Run:  python3 demos/busy_network_walkthrough.py
"""

from neighborhood.capture.scenario import ScenarioSpec, generate_scenario
from neighborhood.classify import classify_window

records, truth = generate_scenario(ScenarioSpec.high_load())
print(f"generated {len(records)} frames over 60 simulated seconds "
      f"({len(truth.names)} devices on channel 6)\n")

doc = classify_window(records)

header = f"{'device':<12} {'address':<18} {'r_sr':>8} {'r_bf':>8}  verdict"
print(header)
print("-" * len(header))
for node in doc["nodes"]:
    addr = node["address"]
    name = truth.names.get(addr, "?")
    r_sr = "-" if node["r_sr"] is None else f"{node['r_sr']:.2f}"
    r_bf = "-" if node["r_bf"] is None else f"{node['r_bf']:.1f}"
    verdict = node["role"] or node["label"]
    print(f"{name:<12} {addr:<18} {r_sr:>8} {r_bf:>8}  {verdict}")

print()
print("what the ratios say:")
print("  - cameras push ~13x more data than they pull in ~1 KB frames,")
print("    landing inside the band r_sr in [4, 20], r_bf in [500, 1500]")
print("  - the AP relays both directions of everything, so its r_sr sits at "
      f"{float(next(n['r_sr'] for n in doc['nodes'] if n['role'] == 'access_point')):.2f}")
print("  - the router never sends management or control frames itself;")
print("    silence plus volume plus an AP link gives it away")

print()
[(ap, ssids)] = doc["ssids"].items()
print(f"access point {ap} advertises {', '.join(ssids)!r}")
print(f"gateway      {doc['gateway']}")
for cam in doc["cameras"]:
    print(f"camera       {cam}  ({truth.names[cam]})")

planted = sorted(truth.cameras())
called = sorted(doc["cameras"])
print()
print(f"planted cameras: {planted}")
print(f"called cameras:  {called}")
print("verdict:", "exact match, no false calls" if planted == called
      else "MISMATCH")
