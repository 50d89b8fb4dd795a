import type {
  BandDoc,
  ClassifyResult,
  ConfigDoc,
  FramesPage,
  GraphDoc,
  HealthDoc,
  ResultEntry,
  StatsDoc,
} from "./types";

/** A non-2xx reply; carries the server's {error, message} body when present. */
export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export interface TimeWindow {
  fromUs?: number | null;
  toUs?: number | null;
}

export interface FramesQuery extends TimeWindow {
  protocol?: string;
  src?: string;
  dst?: string;
  limit?: number;
  offset?: number;
}

export interface ClassifyRequest {
  from_us?: number;
  to_us?: number;
  band?: BandDoc;
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

function windowParams(w?: TimeWindow): URLSearchParams {
  const p = new URLSearchParams();
  if (w?.fromUs != null) p.set("from", String(w.fromUs));
  if (w?.toUs != null) p.set("to", String(w.toUs));
  return p;
}

function withQuery(path: string, params: URLSearchParams): string {
  const q = params.toString();
  return q ? `${path}?${q}` : path;
}

export class Client {
  constructor(
    private baseUrl = "",
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let resp: Response;
    try {
      resp = await this.fetchFn(this.baseUrl + path, init);
    } catch (err) {
      throw new ApiError(0, "unreachable", String(err));
    }
    let body: unknown = null;
    try {
      body = await resp.json();
    } catch {
      // fall through; shape checked below
    }
    if (!resp.ok) {
      const doc = body as { error?: string; message?: string } | null;
      throw new ApiError(
        resp.status,
        doc?.error ?? "http_error",
        doc?.message ?? `HTTP ${resp.status}`,
      );
    }
    if (body === null || typeof body !== "object") {
      throw new ApiError(resp.status, "bad_response", "expected a JSON object");
    }
    return body as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  health(): Promise<HealthDoc> {
    return this.request("/api/health");
  }

  graph(w?: TimeWindow): Promise<GraphDoc> {
    return this.request(withQuery("/api/graph", windowParams(w)));
  }

  nodeStats(w?: TimeWindow): Promise<StatsDoc> {
    return this.request(withQuery("/api/stats/nodes", windowParams(w)));
  }

  frames(q: FramesQuery = {}): Promise<FramesPage> {
    const p = windowParams(q);
    if (q.protocol) p.set("protocol", q.protocol);
    if (q.src) p.set("src", q.src);
    if (q.dst) p.set("dst", q.dst);
    if (q.limit != null) p.set("limit", String(q.limit));
    if (q.offset != null) p.set("offset", String(q.offset));
    return this.request(withQuery("/api/frames", p));
  }

  classify(req: ClassifyRequest = {}): Promise<ClassifyResult> {
    return this.post("/api/classify", req);
  }

  results(kind?: string): Promise<{ results: ResultEntry[] }> {
    const p = new URLSearchParams();
    if (kind) p.set("kind", kind);
    return this.request(withQuery("/api/results", p));
  }

  result(id: number): Promise<{ id: number; kind: string; created_us: number; body: ClassifyResult }> {
    return this.request(`/api/results/${id}`);
  }

  getConfig(): Promise<ConfigDoc> {
    return this.request("/api/config");
  }

  putConfig(doc: Partial<ConfigDoc>): Promise<ConfigDoc> {
    return this.request("/api/config", {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(doc),
    });
  }

  /**
   * Frames observed between two addresses, either direction. The store
   * caps a page at its query limit, so at scale this is a floor.
   */
  async linkFrameCount(a: string, b: string, w?: TimeWindow): Promise<{ count: number; capped: boolean }> {
    const limit = 10_000;
    const [ab, ba] = await Promise.all([
      this.frames({ ...w, src: a, dst: b, limit }),
      this.frames({ ...w, src: b, dst: a, limit }),
    ]);
    return {
      count: ab.count + ba.count,
      capped: ab.count === limit || ba.count === limit,
    };
  }
}
