// Workbench wiring: one state object, one service client, five panels.

import { ServiceClient, ServiceError, StaleSessionError } from "./api";
import type { DefiningResponse, EstimateResponse, SessionPayload } from "./api";
import { SelectionState } from "./state";
import type { SortKey } from "./state";
import { renderTable } from "./table";
import { renderCurve } from "./curve";
import {
  renderBanner, renderBound, renderDefining, renderEstimate, renderHistory,
} from "./panels";

export interface AppElements {
  banner: HTMLElement;
  table: HTMLElement;
  bound: HTMLElement;
  curve: HTMLElement;
  defining: HTMLElement;
  estimate: HTMLElement;
  history: HTMLElement;
  estimateToggle: HTMLInputElement;
}

export class App {
  state!: SelectionState;
  private defining: DefiningResponse | null = null;
  private lastEstimate: EstimateResponse | null = null;
  private pendingSpec: string | null = null;
  private recreating = false;

  constructor(
    private readonly client: ServiceClient,
    private readonly elements: AppElements,
    private payload: SessionPayload,
  ) {}

  async init(): Promise<void> {
    const info = await this.client.createSession(this.payload);
    this.state = new SelectionState(
      info.id,
      this.payload.hypotheses.names,
      info.alpha,
      this.payload.hypotheses.pvalues ?? null,
      this.payload.hypotheses.zscores ?? null,
    );
    await this.loadAnalysisPanels();
    this.elements.estimateToggle.addEventListener("change", () => {
      void this.refreshEstimate();
    });
    this.renderAll();
  }

  private async loadAnalysisPanels(): Promise<void> {
    this.state.curve = (await this.client.curve(this.state.sessionId)).data;
    try {
      this.defining = (await this.client.defining(this.state.sessionId)).data;
    } catch (err) {
      if (err instanceof ServiceError && err.status === 404) this.defining = null;
      else throw err;
    }
  }

  renderAll(): void {
    renderTable(this.elements.table, this.state,
                (name) => void this.onToggle(name),
                (key) => this.onSort(key));
    renderBound(this.elements.bound, this.state.lastBound);
    if (this.state.curve) {
      renderCurve(this.elements.curve, this.state.curve,
                  (r) => void this.onBarClick(r));
    }
    renderDefining(this.elements.defining, this.defining,
                   (names) => void this.onPickDefining(names));
    renderEstimate(this.elements.estimate, this.lastEstimate,
                   this.elements.estimateToggle.checked);
    renderHistory(this.elements.history, this.state.history);
  }

  async onToggle(name: string): Promise<void> {
    this.state.toggle(name);
    this.pendingSpec = this.state.selectionSpec() || null;
    await this.refreshBound();
  }

  async onBarClick(r: number): Promise<void> {
    this.state.selectExactly(this.state.topNames(r));
    this.pendingSpec = `top:${r}`;
    await this.refreshBound();
  }

  async onPickDefining(names: string[]): Promise<void> {
    this.state.selectExactly(names);
    this.pendingSpec = this.state.selectionSpec();
    await this.refreshBound();
  }

  private onSort(key: SortKey): void {
    this.state.setSort(key);
    this.renderAll();
  }

  private async refreshBound(): Promise<void> {
    if (!this.pendingSpec) {
      // empty selection: show the prompt, issue no query
      this.state.lastBound = null;
      this.state.lastBoundRaw = null;
      this.lastEstimate = null;
      this.renderAll();
      return;
    }
    try {
      const reply = await this.client.bound(this.state.sessionId, this.pendingSpec);
      this.state.recordBound(reply);
      renderBanner(this.elements.banner, null);
      await this.refreshEstimate();
    } catch (err) {
      if ((err as Error).name === "AbortError") return; // superseded query
      await this.handleServiceFailure(err);
      return;
    }
    this.renderAll();
  }

  async refreshEstimate(): Promise<void> {
    if (!this.elements.estimateToggle.checked || !this.pendingSpec) {
      this.lastEstimate = null;
      this.renderAll();
      return;
    }
    try {
      this.lastEstimate =
        (await this.client.estimate(this.state.sessionId, this.pendingSpec)).data;
    } catch (err) {
      if ((err as Error).name === "AbortError") return;
      await this.handleServiceFailure(err);
      return;
    }
    this.renderAll();
  }

  private async handleServiceFailure(err: unknown): Promise<void> {
    if (err instanceof StaleSessionError && !this.recreating) {
      // the service restarted and dropped the session: rebuild it once and
      // replay the pending query
      this.recreating = true;
      try {
        const info = await this.client.createSession(this.payload);
        const old = this.state;
        this.state = new SelectionState(
          info.id, old.names, info.alpha, old.pvalues, old.zscores);
        this.state.selected = old.selected;
        this.state.history = old.history;
        await this.loadAnalysisPanels();
        await this.refreshBound();
        // set the notice after the replay so its success does not clear it
        renderBanner(this.elements.banner,
                     "Session was gone; recreated it from the stored inputs.");
      } finally {
        this.recreating = false;
      }
      return;
    }
    const message = err instanceof ServiceError
      ? `Service error: ${err.message}`
      : "Cannot reach the bound service. Is it running?";
    renderBanner(this.elements.banner, message);
  }
}
