import type { GraphDoc } from "./types";

export function formatBytes(n: number): string {
  if (n < 1000) return `${n} B`;
  const units = ["kB", "MB", "GB", "TB"];
  let value = n;
  let unit = "B";
  for (const next of units) {
    if (value < 1000) break;
    value /= 1000;
    unit = next;
  }
  const shown = value >= 100 ? Math.round(value).toString() : value.toFixed(1);
  return `${shown} ${unit}`;
}

/** Ratios arrive as finite numbers or null (undefined / unbounded). */
export function formatRatio(r: number | null): string {
  if (r === null) return "n/a";
  return r.toFixed(2);
}

export function formatSeconds(us: number | null): string {
  if (us === null) return "n/a";
  return `${(us / 1e6).toFixed(1)} s`;
}

function plural(n: number, word: string): string {
  return `${n} ${word}${n === 1 ? "" : "s"}`;
}

/** The brief line above the graph: device, link, and network-name counts. */
export function summaryLine(graph: GraphDoc): string {
  const ssidCount = new Set(Object.values(graph.ssids).flat()).size;
  return [
    plural(graph.nodes.length, "device"),
    plural(graph.links.length, "link"),
    plural(ssidCount, "SSID"),
  ].join(" · ");
}

/** Last two octets are enough to tell nodes apart on screen. */
export function shortAddress(address: string): string {
  const parts = address.split(":");
  if (parts.length >= 2) return parts.slice(-2).join(":");
  return address.length > 8 ? address.slice(-8) : address;
}
