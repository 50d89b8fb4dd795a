import type { GraphDoc } from "./types";
import type { Point } from "./layout";
import type { Selection } from "./state";
import { shortAddress } from "./format";

export interface NodeFlags {
  role: string | null;
  camera: boolean;
}

export interface RenderOptions {
  width: number;
  height: number;
  selection: Selection;
  /** classification overlay; nodes absent from the map carry no marks */
  flags?: Map<string, NodeFlags>;
}

export function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&apos;");
}

export function linkKey(a: string, b: string): string {
  return a <= b ? `${a}|${b}` : `${b}|${a}`;
}

const NODE_RADIUS = 14;

/**
 * The whole graph as one SVG document string. Pure: same graph, layout,
 * and options give the same markup, so refreshes that change nothing
 * repaint nothing new.
 */
export function renderGraph(
  graph: GraphDoc,
  positions: Map<string, Point>,
  opts: RenderOptions,
): string {
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${opts.width} ${opts.height}" ` +
      `width="100%" height="100%" role="img">`,
  );

  const sel = opts.selection;
  for (const [a, b] of graph.links) {
    const pa = positions.get(a);
    const pb = positions.get(b);
    if (!pa || !pb) continue;
    const key = linkKey(a, b);
    const selected =
      sel?.kind === "link" && linkKey(sel.a, sel.b) === key ? " selected" : "";
    parts.push(
      `<line class="link${selected}" data-link="${escapeXml(key)}" ` +
        `x1="${pa.x.toFixed(1)}" y1="${pa.y.toFixed(1)}" ` +
        `x2="${pb.x.toFixed(1)}" y2="${pb.y.toFixed(1)}"/>`,
    );
  }

  for (const node of graph.nodes) {
    const pos = positions.get(node.address);
    if (!pos) continue;
    const flags = opts.flags?.get(node.address);
    const classes = ["node", `p-${node.protocol}`];
    if (sel?.kind === "node" && sel.address === node.address) classes.push("selected");
    if (flags?.camera) classes.push("camera");
    if (flags?.role === "access_point") classes.push("access-point");
    if (flags?.role === "gateway") classes.push("gateway");

    const addr = escapeXml(node.address);
    const x = pos.x.toFixed(1);
    const y = pos.y.toFixed(1);
    parts.push(`<g class="${classes.join(" ")}" data-addr="${addr}" transform="translate(${x},${y})">`);
    parts.push(`<title>${addr}</title>`);
    if (flags?.camera) {
      parts.push(`<circle class="flag" r="${NODE_RADIUS + 6}"/>`);
    }
    if (flags?.role === "access_point") {
      // the beaconing hub: a double ring
      parts.push(`<circle class="halo" r="${NODE_RADIUS + 4}"/>`);
    }
    parts.push(`<circle class="body" r="${NODE_RADIUS}"/>`);
    if (flags?.role === "access_point") {
      parts.push(`<text class="icon" dy="4">AP</text>`);
    } else if (flags?.role === "gateway") {
      parts.push(`<text class="icon" dy="4">GW</text>`);
    } else if (flags?.camera) {
      parts.push(`<text class="icon" dy="4">CAM</text>`);
    }
    parts.push(`<text class="label" dy="${NODE_RADIUS + 14}">${escapeXml(shortAddress(node.address))}</text>`);
    parts.push(`</g>`);
  }

  parts.push("</svg>");
  return parts.join("");
}
