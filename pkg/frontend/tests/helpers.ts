// Test scaffolding: golden bodies recorded from the real service, a fake
// fetch that serves them byte-for-byte, and the workbench DOM skeleton.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { vi } from "vitest";

import type { SessionPayload } from "../src/api";

const GOLDEN_DIR = join(dirname(fileURLToPath(import.meta.url)), "goldens");

export function golden(name: string): string {
  return readFileSync(join(GOLDEN_DIR, name), "utf8");
}

export const SESSION_INFO = JSON.stringify({
  id: "sess-golden", n: 16, alpha: 0.05, test: "fisher",
});

export function adversePayload(): SessionPayload {
  const snapshot = JSON.parse(golden("snapshot.json"));
  return {
    hypotheses: snapshot.hypotheses,
    test: snapshot.test,
    alpha: snapshot.alpha,
  };
}

export interface Route {
  match: (method: string, path: string, setSpec: string | null) => boolean;
  body: string | (() => string);
  status?: number;
}

export interface FakeServiceLog {
  requests: Array<{ method: string; path: string }>;
}

/** Install a fetch stub that answers from the routing table. */
export function installFakeService(routes: Route[]): FakeServiceLog {
  const log: FakeServiceLog = { requests: [] };
  vi.stubGlobal("fetch", (input: RequestInfo | URL, init?: RequestInit) => {
    const url = new URL(String(input));
    const method = init?.method ?? "GET";
    const setSpec = url.searchParams.get("set");
    log.requests.push({ method, path: url.pathname + url.search });
    const route = routes.find((r) => r.match(method, url.pathname, setSpec));
    if (!route) {
      return Promise.resolve(new Response(
        JSON.stringify({ error: `no fake route for ${method} ${url.pathname}` }),
        { status: 500 }));
    }
    const body = typeof route.body === "function" ? route.body() : route.body;
    const signal = init?.signal;
    return new Promise<Response>((resolve, reject) => {
      const finish = () => resolve(new Response(body, { status: route.status ?? 200 }));
      if (signal?.aborted) {
        reject(new DOMException("aborted", "AbortError"));
        return;
      }
      signal?.addEventListener("abort", () =>
        reject(new DOMException("aborted", "AbortError")));
      queueMicrotask(finish);
    });
  });
  return log;
}

export function adverseRoutes(): Route[] {
  const gastro = "Diarrhea,Nausea-and-vomiting,Stomatitis";
  return [
    { match: (m, p) => m === "POST" && p === "/sessions", body: SESSION_INFO, status: 201 },
    { match: (m, p) => m === "GET" && p.endsWith("/curve"), body: golden("curve.json") },
    { match: (m, p) => m === "GET" && p.endsWith("/defining"), body: golden("defining.json") },
    { match: (m, p, s) => m === "GET" && p.endsWith("/bound") && s === gastro,
      body: golden("bound_gastro.json") },
    { match: (m, p, s) => m === "GET" && p.endsWith("/bound") && s === "top:6",
      body: golden("bound_top6.json") },
    { match: (m, p) => m === "GET" && p.endsWith("/estimate"),
      body: golden("estimate_top16.json") },
  ];
}

export function mountWorkbench(): void {
  document.body.innerHTML = `
    <div id="banner"></div>
    <div id="table-panel"></div>
    <div id="bound-panel"></div>
    <div id="curve-panel"></div>
    <div id="defining-panel"></div>
    <div id="estimate-panel"></div>
    <div id="history-panel"></div>
    <input type="checkbox" id="estimate-toggle">
  `;
}

export function appElements() {
  const get = (id: string) => document.getElementById(id) as HTMLElement;
  return {
    banner: get("banner"),
    table: get("table-panel"),
    bound: get("bound-panel"),
    curve: get("curve-panel"),
    defining: get("defining-panel"),
    estimate: get("estimate-panel"),
    history: get("history-panel"),
    estimateToggle: get("estimate-toggle") as HTMLInputElement,
  };
}

/** Drain the microtask/timer queue so async handlers settle. */
export async function flush(rounds = 8): Promise<void> {
  for (let i = 0; i < rounds; i += 1) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}
