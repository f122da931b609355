// Entry point: attach to an existing session (?session=ID) or show the
// CSV loader, then boot the workbench.

import { ServiceClient } from "./api";
import type { SessionPayload } from "./api";
import { App } from "./app";
import type { AppElements } from "./app";

function serviceUrl(): string {
  const param = new URLSearchParams(window.location.search).get("service");
  return (param ?? window.location.origin).replace(/\/$/, "");
}

/** name,p / name,z CSV -> session payload; parsing only, no statistics. */
export function parseCsv(text: string, testKind: string, alpha: number): SessionPayload {
  const lines = text.split(/\r?\n/).map((l) => l.trim()).filter(Boolean);
  if (lines.length < 2) throw new Error("need a header line and at least one row");
  const header = lines[0].split(",").map((c) => c.trim());
  const kind = header[1];
  if (header[0] !== "name" || (kind !== "p" && kind !== "z")) {
    throw new Error("header must be name,p or name,z");
  }
  const names: string[] = [];
  const values: number[] = [];
  for (const line of lines.slice(1)) {
    const [name, raw] = line.split(",").map((c) => c.trim());
    const value = Number(raw);
    if (!name || !Number.isFinite(value)) throw new Error(`bad row: ${line}`);
    names.push(name);
    values.push(value);
  }
  return {
    hypotheses: kind === "p" ? { names, pvalues: values } : { names, zscores: values },
    test: { kind: testKind },
    alpha,
  };
}

function collectElements(): AppElements {
  const get = (id: string) => {
    const el = document.getElementById(id);
    if (!el) throw new Error(`missing #${id}`);
    return el;
  };
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

async function bootFromSession(client: ServiceClient, sessionId: string): Promise<void> {
  const snapshot = (await client.snapshot(sessionId)).data;
  const payload: SessionPayload = {
    hypotheses: snapshot.hypotheses,
    test: snapshot.test,
    alpha: snapshot.alpha,
  };
  await startApp(client, payload);
}

async function startApp(client: ServiceClient, payload: SessionPayload): Promise<void> {
  document.getElementById("loader")!.hidden = true;
  document.getElementById("workbench")!.hidden = false;
  const app = new App(client, collectElements(), payload);
  await app.init();
}

function wireLoader(client: ServiceClient): void {
  const form = document.getElementById("loader-form") as HTMLFormElement;
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const csv = (document.getElementById("csv-input") as HTMLTextAreaElement).value;
    const test = (document.getElementById("test-kind") as HTMLSelectElement).value;
    const alpha = Number((document.getElementById("alpha-input") as HTMLInputElement).value);
    const errorBox = document.getElementById("loader-error")!;
    try {
      const payload = parseCsv(csv, test, alpha);
      errorBox.textContent = "";
      void startApp(client, payload).catch((err) => {
        errorBox.textContent = String(err);
      });
    } catch (err) {
      errorBox.textContent = String(err);
    }
  });
}

if (typeof document !== "undefined" && document.getElementById("loader")) {
  const client = new ServiceClient(serviceUrl());
  const sessionId = new URLSearchParams(window.location.search).get("session");
  if (sessionId) {
    void bootFromSession(client, sessionId).catch((err) => {
      document.getElementById("loader-error")!.textContent = String(err);
    });
  } else {
    wireLoader(client);
  }
}
