/** Browser wire-up: regions for media display, controls, transport, and the
 * info/status boxes, all driven from ProcessLoop state snapshots. */

import { GatewayApi } from "./api.js";
import { buildControlPanel, type ControlPanel } from "./controls.js";
import { ProcessLoop, type UiState } from "./loop.js";
import { pitchRange } from "./pianoroll.js";
import { drawPianoroll } from "./pianoroll.js";
import { drawWaveform } from "./waveform.js";
import type { Viewport } from "./layout.js";

const api = new GatewayApi("");
const loop = new ProcessLoop(api);

const el = (id: string) => document.getElementById(id)!;

let panel: ControlPanel | null = null;
let panelEndpointUrl: string | null = null;

function statusBox(): HTMLElement {
  return el("status-box");
}

function infoBox(): HTMLElement {
  return el("info-box");
}

async function redrawMedia(ui: UiState): Promise<void> {
  const canvas = el("media-canvas") as HTMLCanvasElement;
  const ctx = canvas.getContext("2d")!;
  const state = ui.state;
  if (!state || !state.media_kind || !state.duration_s) {
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    return;
  }
  const base: Omit<Viewport, "mode"> = {
    startS: 0,
    durationS: state.duration_s,
    widthPx: canvas.width,
    heightPx: canvas.height,
  };
  if (state.media_kind === "audio") {
    const wf = await api.waveform(canvas.width);
    drawWaveform(ctx, wf, state.labels, { ...base, mode: "waveform" });
    (el("preview-audio") as HTMLAudioElement).src = "/api/media";
  } else {
    const { notes } = await api.notes();
    const range = pitchRange(notes);
    drawPianoroll(ctx, notes, state.labels, {
      ...base,
      mode: "pianoroll",
      pitchMin: range.min,
      pitchMax: range.max,
    });
    (el("preview-audio") as HTMLAudioElement).src = "/api/preview";
  }
}

function rebuildControls(ui: UiState): void {
  const state = ui.state;
  const host = el("controls-region");
  const url = state?.endpoint?.url ?? null;
  if (url === panelEndpointUrl && panel) return;
  host.textContent = "";
  panel = null;
  panelEndpointUrl = url;
  if (!state?.endpoint) {
    const note = document.createElement("p");
    note.className = "placeholder";
    note.textContent = "select an endpoint";
    host.appendChild(note);
    return;
  }
  panel = buildControlPanel(document, state.endpoint.card.controls, (text) =>
    loop.setInfo(text),
  );
  host.appendChild(panel.root);
  el("endpoint-name").textContent = state.endpoint.card.card.name;
  el("endpoint-description").textContent = state.endpoint.card.card.description;
}

function renderRegistry(ui: UiState): void {
  const select = el("endpoint-select") as HTMLSelectElement;
  const entries = ui.state?.registry ?? [];
  if (select.options.length === entries.length + 1) return;
  select.textContent = "";
  const blank = document.createElement("option");
  blank.value = "";
  blank.textContent = "— pick an endpoint —";
  select.appendChild(blank);
  for (const entry of entries) {
    const option = document.createElement("option");
    option.value = entry.url;
    option.textContent = entry.name;
    select.appendChild(option);
  }
}

function render(ui: UiState): void {
  statusBox().textContent = ui.statusLine;
  infoBox().textContent = ui.infoLine;
  const bar = el("progress-bar") as HTMLProgressElement;
  bar.value = ui.progress.progress;
  (el("undo-btn") as HTMLButtonElement).disabled = !ui.state?.can_undo;
  (el("redo-btn") as HTMLButtonElement).disabled = !ui.state?.can_redo;
  (el("process-btn") as HTMLButtonElement).disabled =
    ui.busy || !ui.state?.media_kind || !ui.state?.endpoint;
  renderRegistry(ui);
  rebuildControls(ui);
  void redrawMedia(ui);
  // highlight the offending field when validation fails (message names it)
  const match = ui.statusLine.match(/Control '([^']+)'/);
  panel?.highlight(match ? match[1] : null);
}

function bind(): void {
  loop.onUpdate(render);

  el("file-input").addEventListener("change", (event) => {
    const input = event.target as HTMLInputElement;
    const file = input.files?.[0];
    if (file) void loop.load(file.name, file);
  });

  el("endpoint-select").addEventListener("change", (event) => {
    const url = (event.target as HTMLSelectElement).value;
    if (url) void loop.setEndpoint(url);
  });

  el("endpoint-url").addEventListener("keydown", (event) => {
    if ((event as KeyboardEvent).key === "Enter") {
      const url = (event.target as HTMLInputElement).value.trim();
      if (url) void loop.setEndpoint(url);
    }
  });

  el("process-btn").addEventListener("click", () => {
    void loop.process(panel ? panel.values() : {});
  });
  el("cancel-btn").addEventListener("click", () => void api.cancel());
  el("undo-btn").addEventListener("click", () => void loop.undo());
  el("redo-btn").addEventListener("click", () => void loop.redo());

  void loop.refresh();
}

bind();
