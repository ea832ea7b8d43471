/** Thin typed wrappers over the gateway's JSON routes. */

import type {
  CardDoc,
  ControlValue,
  NoteDoc,
  ProgressDoc,
  StateDoc,
  WaveformDoc,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export class GatewayApi {
  constructor(
    private readonly base: string = "",
    // wrapped so the call is not bound to this instance (browsers require
    // fetch to be invoked on the global object)
    private readonly fetchImpl: typeof fetch = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchImpl(this.base + path, init);
    const doc = await resp.json();
    if (!resp.ok) {
      throw new ApiError(resp.status, doc.code ?? "error", doc.message ?? resp.statusText);
    }
    return doc as T;
  }

  state(): Promise<StateDoc> {
    return this.request("/api/state");
  }

  progress(): Promise<ProgressDoc> {
    return this.request("/api/progress");
  }

  waveform(bins: number): Promise<WaveformDoc> {
    return this.request(`/api/waveform?bins=${bins}`);
  }

  notes(): Promise<{ notes: NoteDoc[] }> {
    return this.request("/api/notes");
  }

  load(filename: string, payload: Blob): Promise<StateDoc> {
    const form = new FormData();
    form.append("file", payload, filename);
    return this.request("/api/load", { method: "POST", body: form });
  }

  setEndpoint(url: string): Promise<CardDoc> {
    return this.request("/api/endpoint", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ url }),
    });
  }

  process(controls: Record<string, ControlValue>): Promise<{ ok: boolean }> {
    return this.request("/api/process", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ controls }),
    });
  }

  cancel(): Promise<StateDoc> {
    return this.request("/api/cancel", { method: "POST" });
  }

  undo(): Promise<StateDoc> {
    return this.request("/api/undo", { method: "POST" });
  }

  redo(): Promise<StateDoc> {
    return this.request("/api/redo", { method: "POST" });
  }
}
