// Rasterized line plots: enough axes machinery for diagnostic curves.

import { CHAR_H, CHAR_W, drawText, formatNumber } from './font';
import { Raster } from './png';

export interface Series {
  x: number[];
  y: number[];
  color: readonly [number, number, number];
  label?: string;
}

export interface PanelOptions {
  title: string;
  /** horizontal dashed reference lines (value, label) */
  bounds?: { value: number; label: string }[];
}

const AXIS: [number, number, number] = [40, 40, 40];
const BOUND: [number, number, number] = [200, 60, 60];

function niceRange(values: number[]): [number, number] {
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (!Number.isFinite(lo) || !Number.isFinite(hi)) throw new Error('non-finite data');
  if (hi === lo) {
    hi = lo + 1;
    lo -= 1;
  }
  const pad = 0.05 * (hi - lo);
  return [lo - pad, hi + pad];
}

export function drawPanel(
  img: Raster,
  px: number,
  py: number,
  pw: number,
  ph: number,
  series: Series[],
  opts: PanelOptions
): void {
  const ml = 72; // room for y labels
  const mb = 24;
  const mt = 14;
  const x0 = px + ml;
  const y0 = py + mt;
  const iw = pw - ml - 12;
  const ih = ph - mt - mb;

  const allY = series.flatMap((s) => s.y).concat((opts.bounds ?? []).map((b) => b.value));
  const allX = series.flatMap((s) => s.x);
  const [yLo, yHi] = niceRange(allY);
  const [xLo, xHi] = niceRange(allX);
  const sx = (v: number) => x0 + ((v - xLo) / (xHi - xLo)) * iw;
  const sy = (v: number) => y0 + ih - ((v - yLo) / (yHi - yLo)) * ih;

  // frame
  img.hline(x0, x0 + iw, y0 + ih, AXIS);
  img.vline(x0, y0, y0 + ih, AXIS);
  img.hline(x0, x0 + iw, y0, AXIS);
  img.vline(x0 + iw, y0, y0 + ih, AXIS);

  drawText(img, x0 + 4, py + 2, opts.title);
  // y tick labels at bottom/top, x at ends
  drawText(img, px + 2, y0 - 3, formatNumber(yHi));
  drawText(img, px + 2, y0 + ih - CHAR_H + 3, formatNumber(yLo));
  drawText(img, x0 - CHAR_W, y0 + ih + 6, formatNumber(xLo));
  const xhiLabel = formatNumber(xHi);
  drawText(img, x0 + iw - xhiLabel.length * CHAR_W + CHAR_W, y0 + ih + 6, xhiLabel);

  for (const b of opts.bounds ?? []) {
    const yy = Math.round(sy(b.value));
    img.hline(x0, x0 + iw, yy, BOUND, 4);
    drawText(img, x0 + iw - (b.label.length + 1) * CHAR_W, yy - CHAR_H, b.label, BOUND);
  }

  for (const s of series) {
    for (let i = 1; i < s.x.length; i++) {
      img.line(
        Math.round(sx(s.x[i - 1])),
        Math.round(sy(s.y[i - 1])),
        Math.round(sx(s.x[i])),
        Math.round(sy(s.y[i])),
        s.color
      );
    }
    if (s.x.length === 1) {
      const cx = Math.round(sx(s.x[0]));
      const cy = Math.round(sy(s.y[0]));
      for (let dx = -1; dx <= 1; dx++)
        for (let dy = -1; dy <= 1; dy++) img.set(cx + dx, cy + dy, s.color);
    }
  }
}

/** Vertically stacked panels sharing a common width. */
export function stackedFigure(
  panels: { series: Series[]; opts: PanelOptions }[],
  width = 720,
  panelHeight = 260
): Raster {
  const img = new Raster(width, panelHeight * panels.length);
  panels.forEach((p, i) => drawPanel(img, 0, i * panelHeight, width, panelHeight, p.series, p.opts));
  return img;
}
