import * as fs from 'fs';
import * as os from 'os';
import * as path from 'path';
import * as zlib from 'zlib';
import { afterAll, describe, expect, it } from 'vitest';

import { divergingColor, isNegativeBand } from '../src/colormap';
import { encodePng } from '../src/png';
import { maxAbsValue, readPsfield } from '../src/psfield';
import { HEATMAP_UPSCALE, marginals, renderHeatmap,
         renderMarginalsSvg } from '../src/render';
import { plotTrajectory } from '../src/plotTraj';

const FIXTURES = path.join(__dirname, 'fixtures');
const tmp = fs.mkdtempSync(path.join(os.tmpdir(), 'render-'));
afterAll(() => fs.rmSync(tmp, { recursive: true, force: true }));

describe('colormap', () => {
  it('is white at zero and saturates at the bound', () => {
    expect(divergingColor(0, 1)).toEqual([255, 255, 255]);
    expect(divergingColor(2, 1)).toEqual(divergingColor(1, 1));
    expect(divergingColor(-2, 1)).toEqual(divergingColor(-1, 1));
  });

  it('separates the negative band from the positive one', () => {
    expect(isNegativeBand(divergingColor(-0.5, 1))).toBe(true);
    expect(isNegativeBand(divergingColor(0.5, 1))).toBe(false);
  });
});

describe('png encoder', () => {
  it('produces a decodable PNG with the right geometry', () => {
    const rgb = new Uint8Array(2 * 3 * 3);
    rgb.set([255, 0, 0, 0, 255, 0, 0, 0, 255], 0);
    const png = encodePng(3, 2, rgb);
    expect(png.subarray(0, 8)).toEqual(
      Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]));
    expect(png.readUInt32BE(16)).toBe(3);      // width in IHDR
    expect(png.readUInt32BE(20)).toBe(2);
    // IDAT payload inflates back to filter byte + scanline per row
    const idatLen = png.readUInt32BE(33);
    const idat = png.subarray(41, 41 + idatLen);
    const raw = zlib.inflateSync(idat);
    expect(raw.length).toBe((3 * 3 + 1) * 2);
    expect(raw[1]).toBe(255);                  // first pixel red channel
  });

  it('is deterministic', () => {
    const rgb = new Uint8Array(4 * 4 * 3).map((_, i) => (i * 37) % 256);
    expect(encodePng(4, 4, rgb).equals(encodePng(4, 4, rgb))).toBe(true);
  });
});

describe('heatmap rendering', () => {
  const field = readPsfield(path.join(FIXTURES, 'w1.psf'));

  it('sizes the image from the grid', () => {
    const png = renderHeatmap(field, maxAbsValue(field));
    expect(png.readUInt32BE(16)).toBe(32 * HEATMAP_UPSCALE);
    expect(png.readUInt32BE(20)).toBe(32 * HEATMAP_UPSCALE);
  });

  it('shows the below-zero color band for a negative region', () => {
    const bound = maxAbsValue(field);
    const png = renderHeatmap(field, bound, 1);
    const idatLen = png.readUInt32BE(33);
    const raw = zlib.inflateSync(png.subarray(41, 41 + idatLen));
    // scan decoded pixels for blue-dominant (negative) ones
    let negatives = 0;
    for (let y = 0; y < 32; y++) {
      for (let x = 0; x < 32; x++) {
        const o = y * (32 * 3 + 1) + 1 + x * 3;
        if (raw[o + 2] > raw[o]) negatives += 1;
      }
    }
    expect(negatives).toBeGreaterThan(0);
  });
});

describe('marginals', () => {
  it('integrate to the field norm', () => {
    const field = readPsfield(path.join(FIXTURES, 'w1.psf'));
    const m = marginals(field);
    const dq = (field.grid.qMax - field.grid.qMin) / field.grid.nq;
    let total = 0;
    for (const v of m.q) total += v * dq;
    expect(total).toBeCloseTo(1.0, 10);
  });

  it('renders a fixed-size SVG', () => {
    const field = readPsfield(path.join(FIXTURES, 'w1.psf'));
    const svg = renderMarginalsSvg(field, 1.0, 't = 0');
    expect(svg).toContain('<svg');
    expect(svg).toContain('polyline');
  });
});

describe('plotTrajectory', () => {
  it('emits one heatmap and one marginal plot per frame plus an index', () => {
    const out = path.join(tmp, 'frames');
    const result = plotTrajectory(path.join(FIXTURES, 'traj_quantum'), out);
    expect(result.frames).toBe(5);
    const files = fs.readdirSync(out).sort();
    expect(files.filter((f) => f.endsWith('.png')).length).toBe(5);
    expect(files.filter((f) => f.endsWith('.svg')).length).toBe(5);
    expect(files).toContain('index.md');
    const index = fs.readFileSync(path.join(out, 'index.md'), 'utf-8');
    expect(index.split('\n').filter((l) => l.startsWith('| ')).length)
      .toBe(5 + 1);                       // header + one row per frame
  });

  it('is deterministic across runs', () => {
    const out1 = path.join(tmp, 'd1');
    const out2 = path.join(tmp, 'd2');
    plotTrajectory(path.join(FIXTURES, 'traj_classical'), out1);
    plotTrajectory(path.join(FIXTURES, 'traj_classical'), out2);
    for (const name of fs.readdirSync(out1)) {
      const a = fs.readFileSync(path.join(out1, name));
      const b = fs.readFileSync(path.join(out2, name));
      expect(a.equals(b), name).toBe(true);
    }
  });

  it('errors on an unreadable directory', () => {
    expect(() => plotTrajectory(path.join(tmp, 'missing'),
                                path.join(tmp, 'out'))).toThrow();
  });
});
