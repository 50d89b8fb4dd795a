import { describe, expect, it } from "vitest";
import { layoutGraph } from "../src/layout";
import { escapeXml, linkKey, renderGraph, type NodeFlags } from "../src/render";
import { linkSelection } from "../src/state";
import type { GraphDoc, NodeDoc } from "../src/types";

function node(address: string, protocol: NodeDoc["protocol"] = "wifi"): NodeDoc {
  return {
    address,
    protocol,
    channels: [6],
    first_seen_us: 0,
    last_seen_us: 1,
    frames_total: 1,
    bytes_total: 10,
    r_sr: null,
    r_bf: 10,
    m_frames_sent: 0, c_frames_sent: 0, d_frames_sent: 1,
    m_frames_recv: 0, c_frames_recv: 0, d_frames_recv: 0,
    m_bytes_sent: 0, c_bytes_sent: 0, d_bytes_sent: 10,
    m_bytes_recv: 0, c_bytes_recv: 0, d_bytes_recv: 0,
  };
}

const ADDRS = ["02:00:00:00:00:01", "02:00:00:00:00:02", "02:00:00:00:00:03"];
const GRAPH: GraphDoc = {
  nodes: ADDRS.map((a) => node(a)),
  links: [[ADDRS[0], ADDRS[1]], [ADDRS[0], ADDRS[2]]],
  ssids: {},
};

function draw(graph: GraphDoc, extra: Partial<Parameters<typeof renderGraph>[2]> = {}): string {
  const positions = layoutGraph(graph.nodes.map((n) => n.address), graph.links, 800, 600);
  return renderGraph(graph, positions, { width: 800, height: 600, selection: null, ...extra });
}

describe("graph markup", () => {
  it("draws one group per node and one line per link", () => {
    const svg = draw(GRAPH);
    expect(svg.match(/data-addr=/g)).toHaveLength(3);
    expect(svg.match(/<line class="link"/g)).toHaveLength(2);
    expect(svg.startsWith("<svg ")).toBe(true);
    expect(svg.endsWith("</svg>")).toBe(true);
  });

  it("is a pure function of its inputs", () => {
    expect(draw(GRAPH)).toBe(draw(GRAPH));
  });

  it("marks the selected node", () => {
    const svg = draw(GRAPH, { selection: { kind: "node", address: ADDRS[1] } });
    expect(svg).toContain(`class="node p-wifi selected" data-addr="${ADDRS[1]}"`);
  });

  it("marks the selected link whichever way it was clicked", () => {
    const svg = draw(GRAPH, { selection: linkSelection(ADDRS[1], ADDRS[0]) });
    expect(svg.match(/<line class="link selected"/g)).toHaveLength(1);
  });

  it("badges roles and camera suspects", () => {
    const flags = new Map<string, NodeFlags>([
      [ADDRS[0], { role: "access_point", camera: false }],
      [ADDRS[1], { role: "gateway", camera: false }],
      [ADDRS[2], { role: "camera", camera: true }],
    ]);
    const svg = draw(GRAPH, { flags });
    expect(svg).toContain(">AP</text>");
    expect(svg).toContain(">GW</text>");
    expect(svg).toContain(">CAM</text>");
    expect(svg).toContain('class="node p-wifi camera"');
    expect(svg).toContain('<circle class="flag"');
    expect(svg).toContain('<circle class="halo"');
  });

  it("renders unflagged graphs without badges", () => {
    const svg = draw(GRAPH);
    expect(svg).not.toContain(">AP</text>");
    expect(svg).not.toContain('class="flag"');
  });

  it("skips links whose endpoints have no position", () => {
    const graph: GraphDoc = { ...GRAPH, links: [...GRAPH.links, ["ghost", ADDRS[0]]] };
    const svg = draw(graph);
    expect(svg.match(/<line/g)).toHaveLength(2);
  });

  it("colors by protocol", () => {
    const mixed: GraphDoc = {
      nodes: [node("aa", "wifi"), node("bb", "ble"), node("1a62", "zigbee")],
      links: [],
      ssids: {},
    };
    const svg = draw(mixed);
    expect(svg).toContain("p-wifi");
    expect(svg).toContain("p-ble");
    expect(svg).toContain("p-zigbee");
  });
});

describe("escaping", () => {
  it("neutralizes markup in names from the air", () => {
    expect(escapeXml(`<script>"x"&'y'`)).toBe(
      "&lt;script&gt;&quot;x&quot;&amp;&apos;y&apos;",
    );
  });

  it("escapes addresses end to end", () => {
    const hostile = `aa"><script>`;
    const graph: GraphDoc = { nodes: [node(hostile)], links: [], ssids: {} };
    const svg = draw(graph);
    expect(svg).not.toContain("<script>");
    expect(svg).toContain("&lt;script&gt;");
  });
});

describe("link identity", () => {
  it("builds an order-free key", () => {
    expect(linkKey("b", "a")).toBe("a|b");
    expect(linkKey("a", "b")).toBe("a|b");
  });
});
