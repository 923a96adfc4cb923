/**
 * Field rendering: heatmap PNGs (p vertical, q horizontal, diverging scale
 * centered at 0) and q/p marginal line plots as standalone SVG.
 */

import { divergingColor } from './colormap';
import { encodePng } from './png';
import { PsField, cellArea } from './psfield';

export const HEATMAP_UPSCALE = 4;

/** Render one field as an RGB heatmap; `bound` fixes the color scale. */
export function renderHeatmap(field: PsField, bound: number,
                              upscale: number = HEATMAP_UPSCALE): Buffer {
  const { nq, np } = field.grid;
  const width = nq * upscale;
  const height = np * upscale;
  const rgb = new Uint8Array(width * height * 3);
  for (let y = 0; y < height; y++) {
    const j = np - 1 - Math.floor(y / upscale);     // p decreases downward
    for (let x = 0; x < width; x++) {
      const i = Math.floor(x / upscale);            // q increases rightward
      const [r, g, b] = divergingColor(field.values[i * np + j], bound);
      const o = (y * width + x) * 3;
      rgb[o] = r;
      rgb[o + 1] = g;
      rgb[o + 2] = b;
    }
  }
  return encodePng(width, height, rgb);
}

export interface Marginals {
  q: Float64Array;      // integral over p, one value per q sample
  p: Float64Array;      // integral over q, one value per p sample
}

export function marginals(field: PsField): Marginals {
  const { nq, np } = field.grid;
  const dq = (field.grid.qMax - field.grid.qMin) / nq;
  const dp = (field.grid.pMax - field.grid.pMin) / np;
  const q = new Float64Array(nq);
  const p = new Float64Array(np);
  for (let i = 0; i < nq; i++) {
    for (let j = 0; j < np; j++) {
      const v = field.values[i * np + j];
      q[i] += v * dp;
      p[j] += v * dq;
    }
  }
  return { q, p };
}

function polyline(values: Float64Array, x0: number, y0: number,
                  width: number, height: number, yMin: number,
                  yMax: number): string {
  const span = yMax - yMin || 1;
  const points: string[] = [];
  for (let i = 0; i < values.length; i++) {
    const x = x0 + (i / (values.length - 1)) * width;
    const y = y0 + height - ((values[i] - yMin) / span) * height;
    points.push(`${x.toFixed(2)},${y.toFixed(2)}`);
  }
  return points.join(' ');
}

/**
 * Both marginals in one 640x240 SVG; `bound` fixes the vertical scale so
 * frames of one trajectory are comparable.
 */
export function renderMarginalsSvg(field: PsField, bound: number,
                                   label: string): string {
  const m = marginals(field);
  const yMin = Math.min(0, -0.05 * bound);
  const yMax = bound * 1.05;
  const panels = [
    { data: m.q, x0: 40, name: 'q marginal' },
    { data: m.p, x0: 360, name: 'p marginal' },
  ];
  const parts: string[] = [
    '<svg xmlns="http://www.w3.org/2000/svg" width="640" height="240" viewBox="0 0 640 240">',
    '<rect width="640" height="240" fill="white"/>',
    `<text x="320" y="18" text-anchor="middle" font-family="monospace" font-size="13">${label}</text>`,
  ];
  for (const panel of panels) {
    const zeroY = 210 - ((0 - yMin) / (yMax - yMin)) * 170;
    parts.push(
      `<rect x="${panel.x0}" y="40" width="240" height="170" fill="none" stroke="#999"/>`,
      `<line x1="${panel.x0}" y1="${zeroY.toFixed(2)}" x2="${panel.x0 + 240}" y2="${zeroY.toFixed(2)}" stroke="#ccc"/>`,
      `<polyline fill="none" stroke="#1f4e9c" stroke-width="1.5" points="${polyline(
        panel.data, panel.x0, 40, 240, 170, yMin, yMax)}"/>`,
      `<text x="${panel.x0 + 120}" y="232" text-anchor="middle" font-family="monospace" font-size="11">${panel.name}</text>`,
    );
  }
  parts.push('</svg>');
  return parts.join('\n') + '\n';
}

/** Global marginal bound across snapshots (for the shared SVG scale). */
export function marginalBound(fields: PsField[]): number {
  let bound = 0;
  for (const f of fields) {
    const m = marginals(f);
    for (const v of m.q) bound = Math.max(bound, Math.abs(v));
    for (const v of m.p) bound = Math.max(bound, Math.abs(v));
  }
  return bound;
}
