/** Piano-roll note rectangles plus pitch-anchored label markers. */

import { labelColor, layoutLabel, type Viewport } from "./layout.js";
import type { LabelDoc, NoteDoc } from "./types.js";

export interface NoteRect {
  x: number;
  y: number;
  width: number;
  height: number;
}

export function pitchRange(notes: NoteDoc[]): { min: number; max: number } {
  if (notes.length === 0) return { min: 48, max: 72 };
  let min = 127;
  let max = 0;
  for (const n of notes) {
    min = Math.min(min, n.pitch);
    max = Math.max(max, n.pitch);
  }
  // pad a couple of rows so edge notes do not hug the border
  return { min: Math.max(0, min - 2), max: Math.min(127, max + 2) };
}

export function noteRect(note: NoteDoc, vp: Viewport): NoteRect {
  const rows = vp.pitchMax! - vp.pitchMin! + 1;
  const rowHeight = vp.heightPx / rows;
  return {
    x: ((note.start_s - vp.startS) / vp.durationS) * vp.widthPx,
    y: (vp.pitchMax! - note.pitch) / rows * vp.heightPx,
    width: (note.duration_s / vp.durationS) * vp.widthPx,
    height: rowHeight,
  };
}

export function drawPianoroll(
  ctx: CanvasRenderingContext2D,
  notes: NoteDoc[],
  labels: LabelDoc[],
  vp: Viewport,
): void {
  ctx.clearRect(0, 0, vp.widthPx, vp.heightPx);
  const rows = vp.pitchMax! - vp.pitchMin! + 1;
  const rowHeight = vp.heightPx / rows;
  ctx.fillStyle = "#f2f2f2";
  for (let pitch = vp.pitchMin!; pitch <= vp.pitchMax!; pitch += 2) {
    const y = ((vp.pitchMax! - pitch) / rows) * vp.heightPx;
    ctx.fillRect(0, y, vp.widthPx, rowHeight);
  }
  ctx.fillStyle = "#2a9d8f";
  for (const note of notes) {
    const rect = noteRect(note, vp);
    ctx.fillRect(rect.x, rect.y, Math.max(rect.width, 1), rect.height);
  }
  labels.forEach((label, i) => {
    const geo = layoutLabel(label, vp);
    if (!geo.visible) return;
    ctx.fillStyle = labelColor(label, i);
    ctx.beginPath();
    ctx.arc(geo.xPx, geo.yPx, 4, 0, Math.PI * 2);
    ctx.fill();
  });
}
