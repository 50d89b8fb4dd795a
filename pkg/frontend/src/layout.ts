import type { LinkPair } from "./types";

export interface Point {
  x: number;
  y: number;
}

/** FNV-1a over the sorted address list: same node set, same seed. */
export function nodeSetSeed(addresses: string[]): number {
  const key = [...addresses].sort().join("\n");
  let h = 0x811c9dc5;
  for (let i = 0; i < key.length; i++) {
    h ^= key.charCodeAt(i);
    h = Math.imul(h, 0x01000193);
  }
  return h >>> 0;
}

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/**
 * Force-directed placement that is a pure function of the node set and
 * links: seeding from the set hash keeps a stable topology from
 * reshuffling on every refresh.
 */
export function layoutGraph(
  addresses: string[],
  links: LinkPair[],
  width: number,
  height: number,
): Map<string, Point> {
  const order = [...addresses].sort();
  const n = order.length;
  const out = new Map<string, Point>();
  if (n === 0) return out;

  const cx = width / 2;
  const cy = height / 2;
  if (n === 1) {
    out.set(order[0], { x: cx, y: cy });
    return out;
  }

  const rand = mulberry32(nodeSetSeed(order));
  const radius = Math.min(width, height) * 0.35;
  const xs = new Float64Array(n);
  const ys = new Float64Array(n);
  const index = new Map<string, number>();
  order.forEach((addr, i) => {
    index.set(addr, i);
    // golden-angle spiral plus seeded jitter to break symmetry
    const r = radius * Math.sqrt((i + 0.5) / n);
    const theta = i * 2.3999632297286535 + rand() * 0.3;
    xs[i] = cx + r * Math.cos(theta);
    ys[i] = cy + r * Math.sin(theta);
  });

  const edges: Array<[number, number]> = [];
  for (const [a, b] of links) {
    const ia = index.get(a);
    const ib = index.get(b);
    if (ia !== undefined && ib !== undefined && ia !== ib) edges.push([ia, ib]);
  }

  const k = Math.sqrt((width * height) / n) * 0.6;
  const steps = 150;
  let temperature = Math.min(width, height) / 8;
  const dx = new Float64Array(n);
  const dy = new Float64Array(n);

  for (let step = 0; step < steps; step++) {
    dx.fill(0);
    dy.fill(0);
    for (let i = 0; i < n; i++) {
      for (let j = i + 1; j < n; j++) {
        let vx = xs[i] - xs[j];
        let vy = ys[i] - ys[j];
        let d2 = vx * vx + vy * vy;
        if (d2 < 1e-6) {
          // coincident points repel along a seeded direction
          const a = rand() * Math.PI * 2;
          vx = Math.cos(a);
          vy = Math.sin(a);
          d2 = 1;
        }
        const d = Math.sqrt(d2);
        const force = (k * k) / d2;
        dx[i] += (vx / d) * force * k * 0.5;
        dy[i] += (vy / d) * force * k * 0.5;
        dx[j] -= (vx / d) * force * k * 0.5;
        dy[j] -= (vy / d) * force * k * 0.5;
      }
    }
    for (const [ia, ib] of edges) {
      const vx = xs[ia] - xs[ib];
      const vy = ys[ia] - ys[ib];
      const d = Math.max(Math.sqrt(vx * vx + vy * vy), 1e-3);
      const force = (d * d) / k / d;
      dx[ia] -= vx * force * 0.02;
      dy[ia] -= vy * force * 0.02;
      dx[ib] += vx * force * 0.02;
      dy[ib] += vy * force * 0.02;
    }
    for (let i = 0; i < n; i++) {
      // gentle pull to center keeps disconnected pieces on screen
      dx[i] += (cx - xs[i]) * 0.02;
      dy[i] += (cy - ys[i]) * 0.02;
      const mag = Math.sqrt(dx[i] * dx[i] + dy[i] * dy[i]);
      const cap = Math.min(mag, temperature);
      if (mag > 1e-9) {
        xs[i] += (dx[i] / mag) * cap;
        ys[i] += (dy[i] / mag) * cap;
      }
    }
    temperature *= 0.97;
  }

  const pad = 30;
  for (let i = 0; i < n; i++) {
    out.set(order[i], {
      x: Math.min(Math.max(xs[i], pad), width - pad),
      y: Math.min(Math.max(ys[i], pad), height - pad),
    });
  }
  return out;
}
