import type { ScanDoc } from "./types";

/** Total observation time for one pass over the hop plan. */
export function sweepSeconds(dwellS: number, hops: number): number {
  return dwellS * hops;
}

/** Human line for the scan panel, e.g. "65 s per sweep". */
export function formatSweep(dwellS: number, hops: number): string {
  const total = sweepSeconds(dwellS, hops);
  // trim float noise but keep honest fractions: 65 -> "65", 7.5 -> "7.5"
  const shown = String(Math.round(total * 1000) / 1000);
  return `${shown} s per sweep`;
}

export interface ScanForm {
  protocol: string;
  channels: string; // comma-separated, as typed
  dwell_s: number;
  hops: number | null;
  refresh_s: number;
}

/** Parse "1, 6,11" into channel numbers; null on any bad entry. */
export function parseChannels(text: string): number[] | null {
  const parts = text.split(",").map((s) => s.trim()).filter((s) => s.length > 0);
  const out: number[] = [];
  for (const part of parts) {
    if (!/^\d+$/.test(part)) return null;
    out.push(Number(part));
  }
  return out;
}

/**
 * Client-side mirror of the server's scan-config rules, so bad forms are
 * caught before the round trip. Messages match the server's 400s.
 */
export function validateScanForm(form: ScanForm): string[] {
  const problems: string[] = [];
  if (!["wifi", "ble", "zigbee"].includes(form.protocol)) {
    problems.push(`unknown protocol '${form.protocol}'`);
  }
  const channels = parseChannels(form.channels);
  if (channels === null) {
    problems.push("channels must be comma-separated numbers");
  } else if (channels.length === 0) {
    problems.push("channel list is empty");
  } else if (new Set(channels).size !== channels.length) {
    problems.push("channel list repeats a channel");
  }
  if (!(Number.isFinite(form.dwell_s) && form.dwell_s > 0)) {
    problems.push(`dwell must be a positive number, got ${form.dwell_s}`);
  }
  if (form.hops !== null && (!Number.isInteger(form.hops) || form.hops < 1)) {
    problems.push(`hops must be at least 1, got ${form.hops}`);
  }
  if (!(Number.isFinite(form.refresh_s) && form.refresh_s > 0)) {
    problems.push(`refresh must be a positive number, got ${form.refresh_s}`);
  }
  return problems;
}

/** Form -> wire doc. Call only after validateScanForm returns []. */
export function scanDocFromForm(form: ScanForm): ScanDoc {
  return {
    protocol: form.protocol as ScanDoc["protocol"],
    channels: parseChannels(form.channels) ?? [],
    dwell_s: form.dwell_s,
    hops: form.hops,
    refresh_s: form.refresh_s,
  };
}
