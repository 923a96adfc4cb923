/**
 * compare: side-by-side kernel comparison of two or three trajectory
 * directories sharing one grid and snapshot times.  Emits a Markdown report
 * with a per-time pairwise L2 distance table, recomputed norms checked
 * against each run's diagnostics.csv, and aligned frames.
 */

import * as fs from 'fs';
import * as path from 'path';

import { PsfieldError, integrate, l2Distance, maxAbsValue, sameGrid } from './psfield';
import { renderHeatmap } from './render';
import { Snapshot, readDiagnostics, readTrajectory } from './trajectory';

export interface LabeledRun {
  label: string;
  dir: string;
  snaps: Snapshot[];
}

export interface CompareResult {
  reportFile: string;
  times: number[];
  /** pair label -> per-time L2 distances */
  distances: Map<string, number[]>;
  /** max |recomputed norm - diagnostics norm| over all runs and times */
  normCheck: number;
}

export function compareTrajectories(dirs: { label: string; dir: string }[],
                                    outFile: string): CompareResult {
  if (dirs.length < 2 || dirs.length > 3) {
    throw new PsfieldError('compare needs two or three trajectory directories');
  }
  const runs: LabeledRun[] = dirs.map(({ label, dir }) => ({
    label,
    dir,
    snaps: readTrajectory(dir),
  }));

  const first = runs[0].snaps;
  for (const run of runs.slice(1)) {
    if (run.snaps.length !== first.length) {
      throw new PsfieldError(
        `${run.dir}: ${run.snaps.length} snapshots, expected ${first.length}`);
    }
    if (!sameGrid(run.snaps[0].field.grid, first[0].field.grid)) {
      throw new PsfieldError(`${run.dir}: grid differs across directories`);
    }
    run.snaps.forEach((s, i) => {
      if (Math.abs(s.time - first[i].time) > 1e-9) {
        throw new PsfieldError(
          `${run.dir}: snapshot ${i} at t=${s.time}, expected ${first[i].time}`);
      }
    });
  }

  // norms recomputed from the field files vs the diagnostics the CLI wrote
  let normCheck = 0;
  for (const run of runs) {
    const diag = readDiagnostics(run.dir);
    run.snaps.forEach((s, i) => {
      const row = diag.find((r) => Math.abs(r.t - s.time) <= 1e-9);
      if (!row) {
        throw new PsfieldError(`${run.dir}: no diagnostics row for t=${s.time}`);
      }
      normCheck = Math.max(normCheck, Math.abs(integrate(s.field) - row.norm));
    });
  }

  const pairs: [number, number][] = [];
  for (let a = 0; a < runs.length; a++) {
    for (let b = a + 1; b < runs.length; b++) pairs.push([a, b]);
  }
  const distances = new Map<string, number[]>();
  for (const [a, b] of pairs) {
    const key = `${runs[a].label}|${runs[b].label}`;
    distances.set(key, first.map((_, i) =>
      l2Distance(runs[a].snaps[i].field, runs[b].snaps[i].field)));
  }

  const outDir = path.dirname(path.resolve(outFile));
  const frameDir = path.join(outDir, 'frames');
  fs.mkdirSync(frameDir, { recursive: true });
  const bound = Math.max(...runs.map(
    (run) => Math.max(...run.snaps.map((s) => maxAbsValue(s.field)))));
  for (const run of runs) {
    run.snaps.forEach((s, i) => {
      const name = `${run.label}_${String(i).padStart(5, '0')}.png`;
      fs.writeFileSync(path.join(frameDir, name),
        renderHeatmap(s.field, bound));
    });
  }

  const lines: string[] = [
    '# Kernel comparison',
    '',
    runs.map((r) => `- **${r.label}**: \`${path.resolve(r.dir)}\``).join('\n'),
    '',
    `Shared color scale: max |value| = ${bound.toExponential(9)}.`,
    `Recomputed norms match diagnostics.csv to ${normCheck.toExponential(3)}.`,
    '',
    '## Pairwise L2 distances',
    '',
    '| t | ' + pairs.map(([a, b]) =>
      `${runs[a].label} vs ${runs[b].label}`).join(' | ') + ' |',
    '|---|' + pairs.map(() => '---|').join(''),
  ];
  first.forEach((s, i) => {
    const cells = pairs.map(([a, b]) =>
      distances.get(`${runs[a].label}|${runs[b].label}`)![i].toExponential(9));
    lines.push(`| ${s.time.toFixed(9)} | ${cells.join(' | ')} |`);
  });
  lines.push('', '## Aligned frames', '',
    '| t | ' + runs.map((r) => r.label).join(' | ') + ' |',
    '|---|' + runs.map(() => '---|').join(''));
  first.forEach((s, i) => {
    const cells = runs.map((run) =>
      `![](frames/${run.label}_${String(i).padStart(5, '0')}.png)`);
    lines.push(`| ${s.time.toFixed(9)} | ${cells.join(' | ')} |`);
  });
  fs.writeFileSync(outFile, lines.join('\n') + '\n');
  return { reportFile: outFile, times: first.map((s) => s.time), distances,
           normCheck };
}
