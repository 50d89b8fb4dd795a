"""Capture-side plumbing: hop schedules, pcap files, replay, traffic synthesis."""
