/**
 * Trajectory directories: snap_<index>_t=<time>.psf files and the
 * diagnostics.csv written by `phasesim evolve`.
 */

import * as fs from 'fs';
import * as path from 'path';

import { PsField, PsfieldError, readPsfield, sameGrid } from './psfield';

export interface Snapshot {
  index: number;
  time: number;
  file: string;
  field: PsField;
}

export interface DiagnosticsRow {
  t: number;
  norm: number;
  innerSelf: number;
  energy: number;
}

const SNAP_RE = /^snap_(\d+)_t=([0-9.+-eE]+)\.psf$/;

export function readTrajectory(dir: string): Snapshot[] {
  let entries: string[];
  try {
    entries = fs.readdirSync(dir);
  } catch (err) {
    throw new PsfieldError(`cannot read trajectory directory ${dir}: ${err}`);
  }
  const snaps: Snapshot[] = [];
  for (const name of entries) {
    const m = SNAP_RE.exec(name);
    if (!m) continue;
    const file = path.join(dir, name);
    snaps.push({
      index: Number(m[1]),
      time: Number(m[2]),
      file,
      field: readPsfield(file),
    });
  }
  if (snaps.length === 0) {
    throw new PsfieldError(`no snap_*.psf files in ${dir}`);
  }
  snaps.sort((a, b) => a.index - b.index);
  const grid = snaps[0].field.grid;
  for (const s of snaps) {
    if (!sameGrid(s.field.grid, grid)) {
      throw new PsfieldError(`${s.file}: grid differs from the first snapshot`);
    }
  }
  return snaps;
}

export function readDiagnostics(dir: string): DiagnosticsRow[] {
  const file = path.join(dir, 'diagnostics.csv');
  let text: string;
  try {
    text = fs.readFileSync(file, 'utf-8');
  } catch (err) {
    throw new PsfieldError(`cannot read ${file}: ${err}`);
  }
  const lines = text.trim().split('\n');
  if (lines[0] !== 't,norm,inner_self,energy') {
    throw new PsfieldError(`${file}: unexpected header "${lines[0]}"`);
  }
  return lines.slice(1).map((line) => {
    const cols = line.split(',').map(Number);
    if (cols.length !== 4 || cols.some((v) => !Number.isFinite(v))) {
      throw new PsfieldError(`${file}: malformed row "${line}"`);
    }
    return { t: cols[0], norm: cols[1], innerSelf: cols[2], energy: cols[3] };
  });
}
