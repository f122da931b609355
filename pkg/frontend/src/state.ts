// Selection-side state. Analysis inputs never change here; the only thing
// the user mutates is which hypotheses are currently ticked, plus a log of
// what the service said about earlier selections.

import type { BoundResponse, CurveResponse } from "./api";

export interface HistoryEntry {
  selection: string[];
  fLower: number;
  size: number;
  provenance: string;
  raw: string;
}

export type SortKey = "name" | "p" | "selected";

export class SelectionState {
  sessionId: string;
  names: string[];
  pvalues: number[] | null;
  zscores: number[] | null;
  alpha: number;
  selected = new Set<string>();
  lastBound: BoundResponse | null = null;
  lastBoundRaw: string | null = null;
  curve: CurveResponse | null = null;
  history: HistoryEntry[] = [];
  sortKey: SortKey = "p";
  sortAscending = true;

  constructor(sessionId: string, names: string[], alpha: number,
              pvalues: number[] | null = null, zscores: number[] | null = null) {
    this.sessionId = sessionId;
    this.names = names;
    this.pvalues = pvalues;
    this.zscores = zscores;
    this.alpha = alpha;
  }

  toggle(name: string): void {
    if (!this.names.includes(name)) throw new Error(`unknown hypothesis ${name}`);
    if (this.selected.has(name)) this.selected.delete(name);
    else this.selected.add(name);
  }

  selectExactly(names: string[]): void {
    for (const name of names) {
      if (!this.names.includes(name)) throw new Error(`unknown hypothesis ${name}`);
    }
    this.selected = new Set(names);
  }

  /** The r hypotheses with smallest p-values, in the service's order. */
  topNames(r: number): string[] {
    if (!this.curve) throw new Error("curve not loaded");
    return this.curve.order.slice(0, r).map((i) => this.names[i - 1]);
  }

  selectionSpec(): string {
    return [...this.selected].join(",");
  }

  recordBound(reply: { data: BoundResponse; raw: string }): void {
    this.lastBound = reply.data;
    this.lastBoundRaw = reply.raw;
    this.history.push({
      selection: [...reply.data.set],
      fLower: reply.data.f_lower,
      size: reply.data.size,
      provenance: reply.data.provenance,
      raw: reply.raw,
    });
  }

  setSort(key: SortKey): void {
    if (this.sortKey === key) this.sortAscending = !this.sortAscending;
    else {
      this.sortKey = key;
      this.sortAscending = true;
    }
  }

  /** Row order for the table under the current sort. */
  rowOrder(): number[] {
    const idx = this.names.map((_, i) => i);
    const dir = this.sortAscending ? 1 : -1;
    const byName = (a: number, b: number) =>
      this.names[a] < this.names[b] ? -1 : this.names[a] > this.names[b] ? 1 : 0;
    idx.sort((a, b) => {
      if (this.sortKey === "name") return dir * byName(a, b);
      if (this.sortKey === "p") {
        const pa = this.pvalues ? this.pvalues[a] : -(this.zscores?.[a] ?? 0);
        const pb = this.pvalues ? this.pvalues[b] : -(this.zscores?.[b] ?? 0);
        return dir * (pa === pb ? a - b : pa < pb ? -1 : 1);
      }
      const sa = this.selected.has(this.names[a]) ? 0 : 1;
      const sb = this.selected.has(this.names[b]) ? 0 : 1;
      return dir * (sa === sb ? byName(a, b) : sa - sb);
    });
    return idx;
  }
}
