// Typed client for the bound service. The UI computes no statistics: every
// number it shows comes out of one of these responses, and the raw body is
// kept alongside the parsed form so views can be checked byte-for-byte
// against the service.

export interface IntRange {
  lo: number;
  hi: number;
}

export interface BoundResponse {
  alpha: number;
  f_lower: number;
  t_upper: number;
  size: number;
  provenance: "exact" | "upper-bound";
  method: string;
  set: string[];
  tau_set: IntRange;
  phi_set: IntRange;
  fdp_upper: { numerator: number; denominator: number; value: string };
}

export interface CurvePoint {
  r: number;
  f_lower: number;
}

export interface CurveResponse {
  alpha: number;
  method: string;
  provenance: string;
  points: CurvePoint[];
  order: number[]; // 1-based hypothesis indices by ascending p-value
}

export interface DefiningResponse {
  alpha: number;
  count: number;
  defining: string[][];
}

export interface EstimateResponse {
  estimate_t_half: number;
  estimate_f_half: number;
  interval: BoundResponse;
  note: string;
}

export interface SessionInfo {
  id: string;
  n: number;
  alpha: number;
  test: string;
}

export interface SessionPayload {
  hypotheses: { names: string[]; pvalues?: number[]; zscores?: number[] };
  test: { kind: string; thresholds?: number[]; calibration_alpha?: number };
  alpha: number;
}

export interface Snapshot extends SessionPayload {
  id: string;
}

export interface Reply<T> {
  data: T;
  raw: string; // exact body bytes as text
}

export class ServiceError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export class StaleSessionError extends ServiceError {
  constructor() {
    super(404, "session is gone");
  }
}

async function readJson<T>(resp: Response): Promise<Reply<T>> {
  const raw = await resp.text();
  if (resp.status === 404) throw new StaleSessionError();
  if (!resp.ok) {
    let message = `service error ${resp.status}`;
    try {
      message = (JSON.parse(raw) as { error?: string }).error ?? message;
    } catch {
      /* not json, keep the generic message */
    }
    throw new ServiceError(resp.status, message);
  }
  return { data: JSON.parse(raw) as T, raw };
}

export class ServiceClient {
  private inflightBound: AbortController | null = null;

  constructor(public baseUrl: string) {}

  async health(): Promise<boolean> {
    try {
      const resp = await fetch(`${this.baseUrl}/healthz`);
      return resp.ok;
    } catch {
      return false;
    }
  }

  async createSession(payload: SessionPayload): Promise<SessionInfo> {
    const resp = await fetch(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
    return (await readJson<SessionInfo>(resp)).data;
  }

  /** Bound queries are latest-wins: a new call aborts the previous one. */
  async bound(sessionId: string, setSpec: string): Promise<Reply<BoundResponse>> {
    this.inflightBound?.abort();
    const controller = new AbortController();
    this.inflightBound = controller;
    const url = `${this.baseUrl}/sessions/${sessionId}/bound?set=${encodeURIComponent(setSpec)}`;
    const resp = await fetch(url, { signal: controller.signal });
    if (this.inflightBound === controller) this.inflightBound = null;
    return readJson<BoundResponse>(resp);
  }

  async curve(sessionId: string): Promise<Reply<CurveResponse>> {
    const resp = await fetch(`${this.baseUrl}/sessions/${sessionId}/curve`);
    return readJson<CurveResponse>(resp);
  }

  async defining(sessionId: string): Promise<Reply<DefiningResponse>> {
    const resp = await fetch(`${this.baseUrl}/sessions/${sessionId}/defining`);
    return readJson<DefiningResponse>(resp);
  }

  async estimate(sessionId: string, setSpec: string): Promise<Reply<EstimateResponse>> {
    const url = `${this.baseUrl}/sessions/${sessionId}/estimate?set=${encodeURIComponent(setSpec)}`;
    const resp = await fetch(url);
    return readJson<EstimateResponse>(resp);
  }

  async snapshot(sessionId: string): Promise<Reply<Snapshot>> {
    const resp = await fetch(`${this.baseUrl}/sessions/${sessionId}/snapshot`);
    return readJson<Snapshot>(resp);
  }
}
