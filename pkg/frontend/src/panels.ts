// The readout panels: live bound, defining rejections, estimate overlay,
// history, and the connectivity banner. Everything displayed is lifted
// straight out of a service response.

import type { BoundResponse, DefiningResponse, EstimateResponse } from "./api";
import type { HistoryEntry } from "./state";

const ESTIMATE_CAVEAT =
  "Median-style estimate computed at level 1/2: it errs low with " +
  "probability at most one half, simultaneously over all selections. " +
  "Read it only next to the confidence set, never alone.";

const HISTORY_TOOLTIP =
  "Browsing is statistically free: every statement in this log holds " +
  "simultaneously at the same confidence level, so picking your favourite " +
  "afterwards does not invalidate it.";

export function renderBound(container: HTMLElement, bound: BoundResponse | null): void {
  container.replaceChildren();
  if (!bound) {
    const prompt = document.createElement("p");
    prompt.className = "placeholder";
    prompt.textContent = "Tick hypotheses to reject, or click a bar in the curve.";
    container.appendChild(prompt);
    return;
  }
  const confidence = Math.round((1 - bound.alpha) * 100);
  const headline = document.createElement("p");
  headline.className = "bound-headline";
  const fLower = document.createElement("strong");
  fLower.id = "f-lower-value";
  fLower.textContent = String(bound.f_lower);
  headline.append("≥ ", fLower,
                  ` correct rejection${bound.f_lower === 1 ? "" : "s"} among `,
                  String(bound.size), ` (${confidence}%)`);
  container.appendChild(headline);

  const detail = document.createElement("dl");
  detail.className = "bound-detail";
  const rows: Array<[string, string, string?]> = [
    ["false rejections τ", `{${bound.tau_set.lo} .. ${bound.tau_set.hi}}`, "tau-set"],
    ["correct rejections φ", `{${bound.phi_set.lo} .. ${bound.phi_set.hi}}`, "phi-set"],
    ["FDP at most", bound.fdp_upper.value, "fdp-upper"],
  ];
  for (const [label, value, id] of rows) {
    const dt = document.createElement("dt");
    dt.textContent = label;
    const dd = document.createElement("dd");
    if (id) dd.id = id;
    dd.textContent = value;
    detail.append(dt, dd);
  }
  container.appendChild(detail);

  const badge = document.createElement("span");
  badge.id = "provenance-badge";
  badge.className = `badge ${bound.provenance === "exact" ? "badge-exact" : "badge-bound"}`;
  badge.textContent = bound.provenance === "exact"
    ? "exact (closed testing)"
    : "bound (shortcut)";
  badge.title = bound.method;
  container.appendChild(badge);
}

export function renderDefining(
  container: HTMLElement,
  defining: DefiningResponse | null,
  onPick: (names: string[]) => void,
): void {
  container.replaceChildren();
  if (!defining) {
    const note = document.createElement("p");
    note.className = "placeholder";
    note.textContent = "Defining rejections need the exact engine (small n).";
    container.appendChild(note);
    return;
  }
  if (defining.defining.length === 0) {
    const note = document.createElement("p");
    note.className = "placeholder";
    note.textContent = "No set is rejected outright at this level.";
    container.appendChild(note);
    return;
  }
  const list = document.createElement("ul");
  list.className = "defining-list";
  defining.defining.forEach((names, i) => {
    const item = document.createElement("li");
    const button = document.createElement("button");
    button.type = "button";
    button.dataset.defining = String(i);
    button.textContent = names.join(", ");
    button.title = "Load this set as the current selection";
    button.addEventListener("click", () => onPick(names));
    item.appendChild(button);
    list.appendChild(item);
  });
  container.appendChild(list);
}

export function renderEstimate(
  container: HTMLElement,
  estimate: EstimateResponse | null,
  enabled: boolean,
): void {
  container.replaceChildren();
  if (!enabled) return;
  if (!estimate) {
    const note = document.createElement("p");
    note.className = "placeholder";
    note.textContent = "No selection to estimate yet.";
    container.appendChild(note);
    return;
  }
  const line = document.createElement("p");
  line.className = "estimate-line";
  const value = document.createElement("strong");
  value.id = "estimate-value";
  value.textContent = String(estimate.estimate_f_half);
  line.append("Estimated correct rejections: ", value,
              ` (false: ${estimate.estimate_t_half})`);
  container.appendChild(line);
  const caveat = document.createElement("p");
  caveat.className = "estimate-caveat";
  caveat.textContent = ESTIMATE_CAVEAT;
  container.appendChild(caveat);
}

export function renderHistory(container: HTMLElement, history: HistoryEntry[]): void {
  container.replaceChildren();
  const heading = document.createElement("h3");
  heading.textContent = "What-if log";
  heading.title = HISTORY_TOOLTIP;
  container.appendChild(heading);
  const list = document.createElement("ol");
  list.className = "history-list";
  for (const entry of [...history].reverse()) {
    const item = document.createElement("li");
    item.textContent =
      `{${entry.selection.join(", ")}} → ≥ ${entry.fLower}/${entry.size} ` +
      `correct [${entry.provenance}]`;
    list.appendChild(item);
  }
  container.appendChild(list);
}

export function renderBanner(container: HTMLElement, message: string | null): void {
  container.replaceChildren();
  if (!message) return;
  const banner = document.createElement("div");
  banner.className = "banner";
  banner.setAttribute("role", "alert");
  banner.textContent = message;
  container.appendChild(banner);
}
