// End-to-end workbench behaviour against recorded service bodies: what the
// panels display must be exactly what the service said.

import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ServiceClient } from "../src/api";
import { App } from "../src/app";
import {
  adversePayload, adverseRoutes, appElements, flush, golden,
  installFakeService, mountWorkbench,
} from "./helpers";

const GASTRO = ["Diarrhea", "Nausea-and-vomiting", "Stomatitis"];

async function bootApp() {
  const app = new App(new ServiceClient("http://fake"), appElements(), adversePayload());
  await app.init();
  await flush();
  return app;
}

beforeEach(() => {
  mountWorkbench();
});

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("workbench end to end", () => {
  it("selecting the gastro triple shows the service's f_lower of 1", async () => {
    installFakeService(adverseRoutes());
    const app = await bootApp();

    for (const name of GASTRO) {
      const tick = document.querySelector<HTMLInputElement>(
        `input[data-name="${name}"]`);
      expect(tick).not.toBeNull();
      tick!.click();
      await flush();
    }

    const goldenBody = golden("bound_gastro.json");
    const expected = JSON.parse(goldenBody);
    expect(expected.f_lower).toBe(1);

    // displayed number equals the service number, and the stored body is
    // byte-identical to what the service sent
    expect(document.getElementById("f-lower-value")!.textContent)
      .toBe(String(expected.f_lower));
    expect(app.state.lastBoundRaw).toBe(goldenBody);
    expect(document.getElementById("provenance-badge")!.textContent)
      .toBe("exact (closed testing)");
    expect(document.getElementById("tau-set")!.textContent)
      .toBe(`{${expected.tau_set.lo} .. ${expected.tau_set.hi}}`);
    expect(document.getElementById("phi-set")!.textContent)
      .toBe(`{${expected.phi_set.lo} .. ${expected.phi_set.hi}}`);
    expect(document.getElementById("fdp-upper")!.textContent)
      .toBe(expected.fdp_upper.value);
  });

  it("clicking curve bar r=6 selects the top six and shows f_lower 4", async () => {
    installFakeService(adverseRoutes());
    const app = await bootApp();

    const bar = document.querySelector<SVGRectElement>('rect[data-r="6"]');
    expect(bar).not.toBeNull();
    bar!.dispatchEvent(new MouseEvent("click", { bubbles: true }));
    await flush();

    const goldenBody = golden("bound_top6.json");
    const expected = JSON.parse(goldenBody);
    expect(expected.f_lower).toBe(4);
    expect(document.getElementById("f-lower-value")!.textContent)
      .toBe(String(expected.f_lower));
    expect(app.state.lastBoundRaw).toBe(goldenBody);
    expect(app.state.selected.size).toBe(6);
    // curve order is by ascending p-value, so the six smallest are ticked
    const curve = JSON.parse(golden("curve.json"));
    const names = adversePayload().hypotheses.names;
    for (const idx of curve.order.slice(0, 6)) {
      expect(app.state.selected.has(names[idx - 1])).toBe(true);
    }
  });

  it("empty selection shows the prompt and issues no bound query", async () => {
    const log = installFakeService([
      ...adverseRoutes(),
      { match: (m, p, s) => m === "GET" && p.endsWith("/bound") && s !== null,
        body: golden("bound_gastro.json") },
    ]);
    const app = await bootApp();
    expect(document.querySelector("#bound-panel .placeholder")).not.toBeNull();
    const boundCalls = () => log.requests.filter((r) => r.path.includes("/bound")).length;
    expect(boundCalls()).toBe(0);

    await app.onToggle("Anemia"); // on: one query
    await flush();
    const afterSelect = boundCalls();
    expect(afterSelect).toBe(1);

    await app.onToggle("Anemia"); // off again: prompt, no new query
    await flush();
    expect(boundCalls()).toBe(afterSelect);
    expect(document.querySelector("#bound-panel .placeholder")).not.toBeNull();
    expect(document.getElementById("f-lower-value")).toBeNull();
  });

  it("clicking a defining rejection loads it as the selection", async () => {
    installFakeService([
      ...adverseRoutes(),
      { match: (m, p, s) => m === "GET" && p.endsWith("/bound") && s !== null,
        body: golden("bound_gastro.json") },
    ]);
    const app = await bootApp();
    const button = document.querySelector<HTMLButtonElement>('button[data-defining="0"]');
    expect(button).not.toBeNull();
    const expectedNames = JSON.parse(golden("defining.json")).defining[0];
    button!.click();
    await flush();
    expect([...app.state.selected].sort()).toEqual([...expectedNames].sort());
  });

  it("estimate toggle overlays the level-1/2 numbers with the caveat", async () => {
    installFakeService([
      ...adverseRoutes(),
      { match: (m, p, s) => m === "GET" && p.endsWith("/bound") && s !== null,
        body: golden("bound_top6.json") },
    ]);
    const app = await bootApp();
    await app.onBarClick(6);
    await flush();
    const toggle = document.getElementById("estimate-toggle") as HTMLInputElement;
    toggle.checked = true;
    await app.refreshEstimate();
    await flush();
    const expected = JSON.parse(golden("estimate_top16.json"));
    expect(document.getElementById("estimate-value")!.textContent)
      .toBe(String(expected.estimate_f_half));
    expect(document.querySelector("#estimate-panel .estimate-caveat")!.textContent)
      .toContain("never alone");
    // switching off removes the overlay
    toggle.checked = false;
    await app.refreshEstimate();
    expect(document.getElementById("estimate-value")).toBeNull();
  });

  it("history logs every answered what-if with the guarantee tooltip", async () => {
    installFakeService([
      ...adverseRoutes(),
      { match: (m, p, s) => m === "GET" && p.endsWith("/bound") && s !== null,
        body: golden("bound_gastro.json") },
    ]);
    const app = await bootApp();
    await app.onBarClick(6);
    await flush();
    await app.onToggle("Headache");
    await flush();
    const items = document.querySelectorAll("#history-panel li");
    expect(items.length).toBe(2);
    const heading = document.querySelector("#history-panel h3")!;
    expect(heading.getAttribute("title")).toContain("simultaneously");
  });

  it("connectivity failure raises the banner", async () => {
    vi.stubGlobal("fetch", () => Promise.reject(new TypeError("refused")));
    const app = new App(new ServiceClient("http://fake"), appElements(), adversePayload());
    await expect(app.init()).rejects.toThrow();
    // now boot properly, then break the network for a live query
    vi.unstubAllGlobals();
    installFakeService(adverseRoutes());
    const app2 = await bootApp();
    vi.stubGlobal("fetch", () => Promise.reject(new TypeError("refused")));
    await app2.onToggle("Diarrhea");
    await flush();
    expect(document.querySelector("#banner .banner")!.textContent)
      .toContain("Cannot reach");
  });

  it("recreates a stale session once and replays the query", async () => {
    let sessionCounter = 0;
    let boundCalls = 0;
    installFakeService([
      { match: (m, p) => m === "POST" && p === "/sessions",
        body: () => JSON.stringify({
          id: `sess-${sessionCounter += 1}`, n: 16, alpha: 0.05, test: "fisher",
        }),
        status: 201 },
      { match: (m, p) => m === "GET" && p.endsWith("/curve"), body: golden("curve.json") },
      { match: (m, p) => m === "GET" && p.endsWith("/defining"), body: golden("defining.json") },
      { match: (m, p) => m === "GET" && p.includes("/sessions/sess-1/bound"),
        body: JSON.stringify({ error: "unknown session" }), status: 404 },
      { match: (m, p) => {
          if (m === "GET" && p.includes("/sessions/sess-2/bound")) {
            boundCalls += 1;
            return true;
          }
          return false;
        },
        body: golden("bound_gastro.json") },
    ]);
    const app = await bootApp();
    expect(app.state.sessionId).toBe("sess-1");
    app.state.toggle("Nausea-and-vomiting");
    app.state.toggle("Stomatitis");
    await app.onToggle("Diarrhea"); // completes the triple; query hits sess-1
    await flush();
    expect(app.state.sessionId).toBe("sess-2");
    expect(boundCalls).toBeGreaterThan(0);
    expect(document.getElementById("f-lower-value")!.textContent).toBe("1");
    expect(document.querySelector("#banner .banner")!.textContent)
      .toContain("recreated");
  });
});
