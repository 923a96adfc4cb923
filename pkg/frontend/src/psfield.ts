/**
 * Reader for PSFIELD 1 files (the phasesim field container).
 *
 * Layout: `PSFIELD 1`, `nq=.. np=..`, the four extents, `role=..`, then nq
 * rows of np comma-separated values (q-major).
 */

import * as fs from 'fs';

export interface GridSpec {
  nq: number;
  np: number;
  qMin: number;
  qMax: number;
  pMin: number;
  pMax: number;
}

export interface PsField {
  grid: GridSpec;
  role: string;
  /** Row-major samples, values[i * np + j] with i the q index. */
  values: Float64Array;
}

export class PsfieldError extends Error {}

function keyValues(line: string, keys: string[], where: string): string[] {
  const parts = line.trim().split(/\s+/);
  if (parts.length !== keys.length) {
    throw new PsfieldError(`${where}: expected ${keys.join(' ')}, got "${line}"`);
  }
  return parts.map((part, i) => {
    const prefix = keys[i] + '=';
    if (!part.startsWith(prefix)) {
      throw new PsfieldError(`${where}: expected key ${keys[i]}, got "${part}"`);
    }
    return part.slice(prefix.length);
  });
}

export function readPsfield(path: string): PsField {
  let text: string;
  try {
    text = fs.readFileSync(path, 'utf-8');
  } catch (err) {
    throw new PsfieldError(`cannot read ${path}: ${err}`);
  }
  const lines = text.split('\n');
  if (lines[0] !== 'PSFIELD 1') {
    throw new PsfieldError(`${path}: not a PSFIELD 1 file`);
  }
  const [nqStr, npStr] = keyValues(lines[1], ['nq', 'np'], path);
  const nq = Number(nqStr);
  const np = Number(npStr);
  if (!Number.isInteger(nq) || !Number.isInteger(np) || nq < 4 || np < 4) {
    throw new PsfieldError(`${path}: bad grid size ${nqStr} x ${npStr}`);
  }
  const ext = keyValues(lines[2], ['q_min', 'q_max', 'p_min', 'p_max'], path)
    .map(Number);
  if (ext.some((v) => !Number.isFinite(v))) {
    throw new PsfieldError(`${path}: non-finite grid extents`);
  }
  const role = keyValues(lines[3], ['role'], path)[0];
  if (lines.length < 4 + nq) {
    throw new PsfieldError(`${path}: expected ${nq} data rows`);
  }
  const values = new Float64Array(nq * np);
  for (let i = 0; i < nq; i++) {
    const row = lines[4 + i].split(',');
    if (row.length !== np) {
      throw new PsfieldError(`${path}: row ${i} has ${row.length} values, expected ${np}`);
    }
    for (let j = 0; j < np; j++) {
      const v = Number(row[j]);
      if (!Number.isFinite(v)) {
        throw new PsfieldError(`${path}: non-finite value at (${i}, ${j})`);
      }
      values[i * np + j] = v;
    }
  }
  return {
    grid: { nq, np, qMin: ext[0], qMax: ext[1], pMin: ext[2], pMax: ext[3] },
    role,
    values,
  };
}

export function sameGrid(a: GridSpec, b: GridSpec): boolean {
  return a.nq === b.nq && a.np === b.np
    && a.qMin === b.qMin && a.qMax === b.qMax
    && a.pMin === b.pMin && a.pMax === b.pMax;
}

export function cellArea(grid: GridSpec): number {
  return ((grid.qMax - grid.qMin) / grid.nq) * ((grid.pMax - grid.pMin) / grid.np);
}

/** Quadrature of the field over the torus (norm for densities). */
export function integrate(field: PsField): number {
  let sum = 0;
  for (const v of field.values) sum += v;
  return sum * cellArea(field.grid);
}

/** L2 distance sqrt(integral (a - b)^2) between fields on one grid. */
export function l2Distance(a: PsField, b: PsField): number {
  if (!sameGrid(a.grid, b.grid)) {
    throw new PsfieldError('fields live on different grids');
  }
  let sum = 0;
  for (let i = 0; i < a.values.length; i++) {
    const d = a.values[i] - b.values[i];
    sum += d * d;
  }
  return Math.sqrt(sum * cellArea(a.grid));
}

export function minValue(field: PsField): number {
  let min = Infinity;
  for (const v of field.values) min = Math.min(min, v);
  return min;
}

export function maxAbsValue(field: PsField): number {
  let max = 0;
  for (const v of field.values) max = Math.max(max, Math.abs(v));
  return max;
}
