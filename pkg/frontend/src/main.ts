import "./style.css";
import { ApiError, Client } from "./api";
import { formatBytes, formatRatio, formatSeconds, summaryLine } from "./format";
import { layoutGraph } from "./layout";
import { Poller } from "./poll";
import { renderGraph, type NodeFlags } from "./render";
import { linkSelection, ViewState } from "./state";
import { formatSweep, scanDocFromForm, validateScanForm, type ScanForm } from "./sweep";
import type { ClassifyResult, ConfigDoc } from "./types";

const client = new Client();
const state = new ViewState();
let flags = new Map<string, NodeFlags>();
let lastResult: ClassifyResult | null = null;

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as T;
};

const graphHost = $("graph");
const banner = $("banner");
const healthEl = $("health");
const summaryEl = $("summary");
const detailEl = $("detail");
const sweepEl = $("sweep-banner");
const formErrors = $("form-errors");

function showError(message: string): void {
  banner.textContent = message;
  banner.classList.add("visible");
}

function clearError(): void {
  banner.classList.remove("visible");
}

function graphSize(): { width: number; height: number } {
  const rect = graphHost.getBoundingClientRect();
  return { width: Math.max(rect.width, 400), height: Math.max(rect.height, 300) };
}

function repaint(): void {
  const graph = state.lastGraph;
  if (!graph) return;
  const { width, height } = graphSize();
  const positions = layoutGraph(
    graph.nodes.map((n) => n.address),
    graph.links,
    width,
    height,
  );
  graphHost.innerHTML = renderGraph(graph, positions, {
    width,
    height,
    selection: state.selection,
    flags,
  });
  summaryEl.textContent = summaryLine(graph);
  renderDetail();
}

function renderDetail(): void {
  const sel = state.selection;
  const graph = state.lastGraph;
  if (!sel || !graph) {
    detailEl.innerHTML = `<p class="hint">Select a node or link in the graph.</p>`;
    return;
  }
  if (sel.kind === "node") {
    const node = graph.nodes.find((n) => n.address === sel.address);
    if (!node) return;
    const labeled = lastResult?.nodes.find((n) => n.address === sel.address);
    const verdict = labeled
      ? `<tr><th>verdict</th><td>${labeled.label}${labeled.role ? ` (${labeled.role})` : ""}</td></tr>`
      : "";
    const row = (name: string, sent: number, recv: number) =>
      `<tr><th>${name}</th><td>${sent}</td><td>${recv}</td></tr>`;
    detailEl.innerHTML = `
      <h3>${node.address}</h3>
      <table class="kv">
        <tr><th>protocol</th><td>${node.protocol}</td></tr>
        <tr><th>channels</th><td>${node.channels.join(", ")}</td></tr>
        <tr><th>frames</th><td>${node.frames_total}</td></tr>
        <tr><th>bytes</th><td>${formatBytes(node.bytes_total)}</td></tr>
        <tr><th>r_sr</th><td>${formatRatio(node.r_sr)}</td></tr>
        <tr><th>r_bf</th><td>${formatRatio(node.r_bf)}</td></tr>
        <tr><th>first seen</th><td>${formatSeconds(node.first_seen_us)}</td></tr>
        <tr><th>last seen</th><td>${formatSeconds(node.last_seen_us)}</td></tr>
        ${verdict}
      </table>
      <table class="kinds">
        <tr><th>frames</th><th>sent</th><th>recv</th></tr>
        ${row("management", node.m_frames_sent, node.m_frames_recv)}
        ${row("control", node.c_frames_sent, node.c_frames_recv)}
        ${row("data", node.d_frames_sent, node.d_frames_recv)}
      </table>`;
    return;
  }
  detailEl.innerHTML = `
    <h3>${sel.a} &harr; ${sel.b}</h3>
    <p>frames on this link: <span id="link-count">counting&hellip;</span></p>`;
  const span = document.getElementById("link-count");
  client
    .linkFrameCount(sel.a, sel.b, { fromUs: state.fromUs, toUs: state.toUs })
    .then(({ count, capped }) => {
      if (span) span.textContent = capped ? `${count}+` : String(count);
    })
    .catch(() => {
      if (span) span.textContent = "unavailable";
    });
}

async function tick(): Promise<void> {
  try {
    const [health, graph] = await Promise.all([
      client.health(),
      client.graph({ fromUs: state.fromUs, toUs: state.toUs }),
    ]);
    healthEl.textContent = `${health.frames} frames stored`;
    state.reconcile(graph);
    clearError();
    repaint();
  } catch (err) {
    // keep the last good view on screen; just say the refresh failed
    const msg = err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
    showError(`refresh failed: ${msg}`);
  }
}

const poller = new Poller(tick);

graphHost.addEventListener("click", (ev) => {
  const target = ev.target as Element;
  const nodeEl = target.closest("[data-addr]");
  if (nodeEl) {
    state.select({ kind: "node", address: nodeEl.getAttribute("data-addr")! });
    repaint();
    return;
  }
  const linkEl = target.closest("[data-link]");
  if (linkEl) {
    const [a, b] = linkEl.getAttribute("data-link")!.split("|");
    state.select(linkSelection(a, b));
    repaint();
    return;
  }
  state.clear();
  repaint();
});

// ------------------------------------------------------------- scan form

function readScanForm(): ScanForm {
  const hopsRaw = ($("hops") as HTMLInputElement).value.trim();
  return {
    protocol: ($("protocol") as HTMLSelectElement).value,
    channels: ($("channels") as HTMLInputElement).value,
    dwell_s: Number(($("dwell") as HTMLInputElement).value),
    hops: hopsRaw === "" ? null : Number(hopsRaw),
    refresh_s: Number(($("refresh") as HTMLInputElement).value),
  };
}

function updateSweepBanner(): void {
  const form = readScanForm();
  const problems = validateScanForm(form);
  if (problems.length > 0 || form.hops === null) {
    sweepEl.textContent = form.hops === null && problems.length === 0
      ? "continuous (no hop limit)"
      : "--";
    return;
  }
  sweepEl.textContent = formatSweep(form.dwell_s, form.hops);
}

function fillForms(config: ConfigDoc): void {
  const scan = config.scan;
  if (scan) {
    ($("protocol") as HTMLSelectElement).value = scan.protocol;
    ($("channels") as HTMLInputElement).value = scan.channels.join(",");
    ($("dwell") as HTMLInputElement).value = String(scan.dwell_s);
    ($("hops") as HTMLInputElement).value = scan.hops === null ? "" : String(scan.hops);
    ($("refresh") as HTMLInputElement).value = String(scan.refresh_s);
  }
  ($("r-sr-min") as HTMLInputElement).value = String(config.band.r_sr_min);
  ($("r-sr-max") as HTMLInputElement).value = String(config.band.r_sr_max);
  ($("r-bf-min") as HTMLInputElement).value = String(config.band.r_bf_min);
  ($("r-bf-max") as HTMLInputElement).value = String(config.band.r_bf_max);
  updateSweepBanner();
}

for (const id of ["dwell", "hops", "channels", "refresh", "protocol"]) {
  $(id).addEventListener("input", updateSweepBanner);
}

$("scan-form").addEventListener("submit", (ev) => {
  ev.preventDefault();
  const form = readScanForm();
  const problems = validateScanForm(form);
  const band = {
    r_sr_min: Number(($("r-sr-min") as HTMLInputElement).value),
    r_sr_max: Number(($("r-sr-max") as HTMLInputElement).value),
    r_bf_min: Number(($("r-bf-min") as HTMLInputElement).value),
    r_bf_max: Number(($("r-bf-max") as HTMLInputElement).value),
  };
  if (problems.length > 0) {
    formErrors.innerHTML = problems.map((p) => `<li>${p}</li>`).join("");
    return;
  }
  formErrors.innerHTML = "";
  client
    .putConfig({ scan: scanDocFromForm(form), band })
    .then(() => {
      updateSweepBanner();
      poller.setPeriod(form.refresh_s);
      state.refreshS = form.refresh_s;
    })
    .catch((err: ApiError) => {
      formErrors.innerHTML = `<li>${err.message}</li>`;
    });
});

$("classify").addEventListener("click", () => {
  const body: { from_us?: number; to_us?: number } = {};
  if (state.fromUs !== null) body.from_us = state.fromUs;
  if (state.toUs !== null) body.to_us = state.toUs;
  client
    .classify(body)
    .then((result) => {
      adoptResult(result);
      repaint();
    })
    .catch((err: ApiError) => showError(`classify failed: ${err.message}`));
});

function adoptResult(result: ClassifyResult): void {
  lastResult = result;
  flags = new Map(
    result.nodes.map((n) => [n.address, { role: n.role, camera: n.label === "camera" }]),
  );
  $("verdict").textContent =
    `${result.cameras.length} camera${result.cameras.length === 1 ? "" : "s"} flagged ` +
    `(result #${result.result_id}, ${result.window.frames} frames)`;
}

$("window-form").addEventListener("submit", (ev) => {
  ev.preventDefault();
  const fromRaw = ($("win-from") as HTMLInputElement).value.trim();
  const toRaw = ($("win-to") as HTMLInputElement).value.trim();
  state.fromUs = fromRaw === "" ? null : Math.round(Number(fromRaw) * 1e6);
  state.toUs = toRaw === "" ? null : Math.round(Number(toRaw) * 1e6);
  void poller.runOnce();
});

// ---------------------------------------------------------------- boot

async function boot(): Promise<void> {
  try {
    const config = await client.getConfig();
    fillForms(config);
    state.refreshS = config.scan?.refresh_s ?? 2;
  } catch {
    state.refreshS = 2;
    updateSweepBanner();
  }
  try {
    const { results } = await client.results("classification");
    if (results.length > 0) {
      const stored = await client.result(results[0].id);
      adoptResult({ ...stored.body, result_id: stored.id });
    }
  } catch {
    // no stored verdicts yet; the classify button still works
  }
  await tick();
  poller.start(state.refreshS);
}

void boot();
