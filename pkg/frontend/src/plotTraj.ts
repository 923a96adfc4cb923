/**
 * plot_traj: one heatmap and one marginal plot per snapshot, plus an index
 * page.  The color scale is fixed per trajectory to the global max |value|
 * across all snapshots.
 */

import * as fs from 'fs';
import * as path from 'path';

import { maxAbsValue, minValue } from './psfield';
import { marginalBound, renderHeatmap, renderMarginalsSvg } from './render';
import { Snapshot, readTrajectory } from './trajectory';

export interface PlotResult {
  frames: number;
  bound: number;
  indexFile: string;
}

export function plotTrajectory(trajDir: string, outDir: string): PlotResult {
  const snaps = readTrajectory(trajDir);
  fs.mkdirSync(outDir, { recursive: true });

  const bound = Math.max(...snaps.map((s) => maxAbsValue(s.field)));
  const mBound = marginalBound(snaps.map((s) => s.field));

  const rows: string[] = [
    '# Trajectory frames',
    '',
    `Source: \`${path.resolve(trajDir)}\``,
    '',
    `Color scale fixed to max |value| = ${bound.toExponential(9)} across all frames.`,
    '',
    '| frame | t | min value | max value | heatmap | marginals |',
    '|---|---|---|---|---|---|',
  ];
  snaps.forEach((snap: Snapshot, idx: number) => {
    const stem = `frame_${String(idx).padStart(5, '0')}`;
    const png = `${stem}.png`;
    const svg = `${stem}_marginals.svg`;
    fs.writeFileSync(path.join(outDir, png),
      renderHeatmap(snap.field, bound));
    fs.writeFileSync(path.join(outDir, svg),
      renderMarginalsSvg(snap.field, mBound, `t = ${snap.time.toFixed(9)}`));
    let min = Infinity;
    let max = -Infinity;
    for (const v of snap.field.values) {
      min = Math.min(min, v);
      max = Math.max(max, v);
    }
    rows.push(`| ${idx} | ${snap.time.toFixed(9)} | ${min.toExponential(6)} `
      + `| ${max.toExponential(6)} | ![](${png}) | ![](${svg}) |`);
  });
  const indexFile = path.join(outDir, 'index.md');
  fs.writeFileSync(indexFile, rows.join('\n') + '\n');
  return { frames: snaps.length, bound, indexFile };
}

export function hasNegativeRegion(trajDir: string): boolean {
  return readTrajectory(trajDir).some((s) => minValue(s.field) < 0);
}
