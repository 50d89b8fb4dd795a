import type { GraphDoc } from "./types";

export type Selection =
  | { kind: "node"; address: string }
  | { kind: "link"; a: string; b: string }
  | null;

export function linkSelection(a: string, b: string): Selection {
  // one identity per pair regardless of click direction
  return a <= b ? { kind: "link", a, b } : { kind: "link", a: b, b: a };
}

/**
 * Everything the page remembers between refreshes. Selections point into
 * the latest graph and survive a refresh as long as the entity is still
 * on the air.
 */
export class ViewState {
  selection: Selection = null;
  fromUs: number | null = null;
  toUs: number | null = null;
  refreshS = 2;
  lastGraph: GraphDoc | null = null;

  select(sel: Selection): void {
    this.selection = sel;
  }

  clear(): void {
    this.selection = null;
  }

  /** Adopt a fresh graph; drop the selection only if its entity vanished. */
  reconcile(graph: GraphDoc): void {
    this.lastGraph = graph;
    const sel = this.selection;
    if (sel === null) return;
    if (sel.kind === "node") {
      if (!graph.nodes.some((n) => n.address === sel.address)) {
        this.selection = null;
      }
      return;
    }
    const present = graph.links.some(([a, b]) => {
      const lo = a <= b ? a : b;
      const hi = a <= b ? b : a;
      return lo === sel.a && hi === sel.b;
    });
    if (!present) this.selection = null;
  }
}
