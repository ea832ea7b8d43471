/** Min/max waveform silhouette plus label markers on a canvas. */

import { labelColor, layoutLabel, type Viewport } from "./layout.js";
import type { LabelDoc, WaveformDoc } from "./types.js";

export interface BinRect {
  x: number;
  y: number;
  width: number;
  height: number;
}

/** One vertical bar per bin; y grows downward, amplitude 1 at the top. */
export function binRects(bins: [number, number][], widthPx: number, heightPx: number): BinRect[] {
  const barWidth = widthPx / Math.max(bins.length, 1);
  return bins.map(([lo, hi], i) => {
    const top = ((1 - hi) / 2) * heightPx;
    const bottom = ((1 - lo) / 2) * heightPx;
    return { x: i * barWidth, y: top, width: barWidth, height: Math.max(bottom - top, 1) };
  });
}

export interface LabelHit {
  label: LabelDoc;
  xPx: number;
  yPx: number;
}

export function drawWaveform(
  ctx: CanvasRenderingContext2D,
  wf: WaveformDoc,
  labels: LabelDoc[],
  vp: Viewport,
): LabelHit[] {
  ctx.clearRect(0, 0, vp.widthPx, vp.heightPx);
  ctx.fillStyle = "#9bb8d3";
  for (const rect of binRects(wf.bins, vp.widthPx, vp.heightPx)) {
    ctx.fillRect(rect.x, rect.y, rect.width, rect.height);
  }
  ctx.strokeStyle = "#46637f";
  ctx.beginPath();
  ctx.moveTo(0, vp.heightPx / 2);
  ctx.lineTo(vp.widthPx, vp.heightPx / 2);
  ctx.stroke();

  const hits: LabelHit[] = [];
  labels.forEach((label, i) => {
    const geo = layoutLabel(label, vp);
    if (!geo.visible) return;
    const color = labelColor(label, i);
    ctx.fillStyle = color;
    ctx.strokeStyle = color;
    if (geo.widthPx > 0) {
      ctx.globalAlpha = 0.25;
      ctx.fillRect(geo.xPx, 0, geo.widthPx, vp.heightPx);
      ctx.globalAlpha = 1;
    }
    ctx.beginPath();
    ctx.moveTo(geo.xPx, 0);
    ctx.lineTo(geo.xPx, vp.heightPx);
    ctx.stroke();
    ctx.beginPath();
    ctx.arc(geo.xPx, geo.yPx, 4, 0, Math.PI * 2);
    ctx.fill();
    hits.push({ label, xPx: geo.xPx, yPx: geo.yPx });
  });
  return hits;
}
