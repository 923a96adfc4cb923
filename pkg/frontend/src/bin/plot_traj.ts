#!/usr/bin/env node
import { plotTrajectory } from '../plotTraj';

function usage(): never {
  console.error('usage: plot_traj --traj <dir> --out <dir>');
  process.exit(2);
}

function main(argv: string[]): number {
  const args = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    if (!argv[i].startsWith('--') || argv[i + 1] === undefined) usage();
    args.set(argv[i].slice(2), argv[i + 1]);
  }
  const traj = args.get('traj');
  const out = args.get('out');
  if (!traj || !out) usage();
  try {
    const result = plotTrajectory(traj, out);
    console.log(`frames=${result.frames}`);
    console.log(`index=${result.indexFile}`);
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
}

process.exit(main(process.argv.slice(2)));
