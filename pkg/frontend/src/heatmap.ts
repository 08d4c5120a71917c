// Scalar plane renders: colormapped heat maps with a numeric range legend.

import { CHAR_H, drawText, formatNumber } from './font';
import { Raster } from './png';

// compact viridis-like anchors, linearly interpolated
const ANCHORS: [number, number, number][] = [
  [68, 1, 84],
  [71, 44, 122],
  [59, 81, 139],
  [44, 113, 142],
  [33, 144, 141],
  [39, 173, 129],
  [92, 200, 99],
  [170, 220, 50],
  [253, 231, 37],
];

export function colormap(t: number): [number, number, number] {
  const x = Math.min(1, Math.max(0, t)) * (ANCHORS.length - 1);
  const i = Math.min(ANCHORS.length - 2, Math.floor(x));
  const f = x - i;
  const a = ANCHORS[i];
  const b = ANCHORS[i + 1];
  return [
    Math.round(a[0] + f * (b[0] - a[0])),
    Math.round(a[1] + f * (b[1] - a[1])),
    Math.round(a[2] + f * (b[2] - a[2])),
  ];
}

export interface HeatmapOptions {
  title: string;
  /** pixels per data cell */
  scale?: number;
  /** fixed value range; data range when omitted */
  range?: [number, number];
}

export function heatmap(
  values: Float64Array,
  width: number,
  height: number,
  opts: HeatmapOptions
): Raster {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (opts.range) [lo, hi] = opts.range;
  if (!(hi > lo)) hi = lo + 1;

  const scale = opts.scale ?? Math.max(1, Math.floor(512 / Math.max(width, height)));
  const header = 16;
  const img = new Raster(width * scale, height * scale + header);
  drawText(img, 4, 4, `${opts.title}  ${formatNumber(lo)} ${formatNumber(hi)}`);
  for (let r = 0; r < height; r++) {
    for (let c = 0; c < width; c++) {
      const rgb = colormap((values[r * width + c] - lo) / (hi - lo));
      for (let dy = 0; dy < scale; dy++)
        for (let dx = 0; dx < scale; dx++)
          img.set(c * scale + dx, header + r * scale + dy, rgb);
    }
  }
  return img;
}
