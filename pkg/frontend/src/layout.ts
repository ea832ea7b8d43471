/** Label layout geometry — the same affine mapping the gateway's session
 * library uses, so markers land on identical pixels in both renderers. */

import type { LabelDoc } from "./types.js";

export interface Viewport {
  startS: number;
  durationS: number;
  widthPx: number;
  heightPx: number;
  mode: "waveform" | "pianoroll";
  pitchMin?: number;
  pitchMax?: number;
}

export interface LabelGeometry {
  xPx: number;
  widthPx: number;
  yPx: number;
  visible: boolean;
}

export function layoutLabel(label: LabelDoc, vp: Viewport): LabelGeometry {
  const x = ((label.t - vp.startS) / vp.durationS) * vp.widthPx;
  const width = ((label.duration ?? 0) / vp.durationS) * vp.widthPx;
  let y: number;
  if (vp.mode === "waveform") {
    const amplitude = label.amplitude ?? 0;
    y = ((1 - amplitude) / 2) * vp.heightPx;
  } else {
    const rows = vp.pitchMax! - vp.pitchMin! + 1;
    const pitch = label.pitch ?? (vp.pitchMin! + vp.pitchMax!) / 2;
    y = ((vp.pitchMax! - pitch + 0.5) / rows) * vp.heightPx;
  }
  const t0 = label.t;
  const t1 = label.t + (label.duration ?? 0);
  const visible = t1 >= vp.startS && t0 <= vp.startS + vp.durationS;
  return { xPx: x, widthPx: width, yPx: y, visible };
}

const PALETTE = [
  "#e63946ff", "#f4a261ff", "#e9c46aff", "#2a9d8fff",
  "#264653ff", "#6a4c93ff", "#3a86ffff", "#ff006eff",
];

/** Explicit label color, or the deterministic palette entry for its index. */
export function labelColor(label: LabelDoc, index: number): string {
  return label.color ?? PALETTE[index % PALETTE.length];
}
