/** The interaction loop: load media, pick an endpoint, process with live
 * progress, undo/redo. Keeps one UiState and replaces it atomically; the
 * view layer re-renders from each snapshot. Headless by design so the whole
 * loop can be exercised against a real gateway without a browser. */

import { ApiError, GatewayApi } from "./api.js";
import type { ControlValue, ProgressDoc, StateDoc } from "./types.js";

export const POLL_INTERVAL_MS = 250;

export interface UiState {
  state: StateDoc | null;
  progress: ProgressDoc;
  /** true while a process request is in flight or being polled */
  busy: boolean;
  statusLine: string;
  infoLine: string;
}

const IDLE: ProgressDoc = { state: "idle", progress: 0, message: "" };

export class ProcessLoop {
  private ui: UiState = { state: null, progress: IDLE, busy: false, statusLine: "", infoLine: "" };
  private readonly listeners: ((ui: UiState) => void)[] = [];

  constructor(
    private readonly api: GatewayApi,
    private readonly sleep: (ms: number) => Promise<void> = (ms) =>
      new Promise((resolve) => setTimeout(resolve, ms)),
  ) {}

  onUpdate(listener: (ui: UiState) => void): void {
    this.listeners.push(listener);
  }

  get current(): UiState {
    return this.ui;
  }

  private publish(patch: Partial<UiState>): void {
    this.ui = { ...this.ui, ...patch };
    for (const listener of this.listeners) listener(this.ui);
  }

  async refresh(): Promise<StateDoc> {
    const state = await this.api.state();
    this.publish({ state, statusLine: state.status, infoLine: state.info });
    return state;
  }

  async load(filename: string, payload: Blob): Promise<void> {
    try {
      const state = await this.api.load(filename, payload);
      this.publish({ state, statusLine: state.status, infoLine: state.info });
    } catch (e) {
      this.publishError(e);
    }
  }

  async setEndpoint(url: string): Promise<void> {
    try {
      await this.api.setEndpoint(url);
      await this.refresh();
    } catch (e) {
      this.publishError(e);
    }
  }

  /** POST /api/process and poll /api/progress until a terminal state. */
  async process(controls: Record<string, ControlValue>): Promise<void> {
    if (this.ui.busy) return;
    this.publish({ busy: true, statusLine: "submitting…" });
    try {
      await this.api.process(controls);
    } catch (e) {
      this.publish({ busy: false });
      this.publishError(e);
      return;
    }
    let progress: ProgressDoc;
    do {
      progress = await this.api.progress();
      this.publish({
        progress,
        statusLine: `${progress.state} ${Math.round(progress.progress * 100)}%`,
      });
      if (progress.state === "queued" || progress.state === "running") {
        await this.sleep(POLL_INTERVAL_MS);
      }
    } while (progress.state === "queued" || progress.state === "running");
    await this.refresh();
    this.publish({ busy: false, progress, statusLine: this.finalStatus(progress) });
  }

  async undo(): Promise<void> {
    const state = await this.api.undo();
    this.publish({ state, statusLine: state.status, infoLine: state.info });
  }

  async redo(): Promise<void> {
    const state = await this.api.redo();
    this.publish({ state, statusLine: state.status, infoLine: state.info });
  }

  setInfo(text: string): void {
    this.publish({ infoLine: text });
  }

  private finalStatus(progress: ProgressDoc): string {
    if (progress.state === "complete") return "complete";
    if (progress.state === "error") return progress.message || "error";
    return progress.state;
  }

  private publishError(e: unknown): void {
    if (e instanceof ApiError) {
      this.publish({ statusLine: `${e.code}: ${e.message}` });
    } else {
      this.publish({ statusLine: String(e) });
    }
  }
}
