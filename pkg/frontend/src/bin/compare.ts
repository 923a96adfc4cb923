#!/usr/bin/env node
import { compareTrajectories } from '../compare';

function usage(): never {
  console.error('usage: compare --a <dir> --b <dir> [--c <dir>] --out <file>');
  process.exit(2);
}

function main(argv: string[]): number {
  const args = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    if (!argv[i].startsWith('--') || argv[i + 1] === undefined) usage();
    args.set(argv[i].slice(2), argv[i + 1]);
  }
  const a = args.get('a');
  const b = args.get('b');
  const out = args.get('out');
  if (!a || !b || !out) usage();
  const dirs = [{ label: 'a', dir: a }, { label: 'b', dir: b }];
  const c = args.get('c');
  if (c) dirs.push({ label: 'c', dir: c });
  try {
    const result = compareTrajectories(dirs, out);
    console.log(`report=${result.reportFile}`);
    console.log(`times=${result.times.length}`);
    console.log(`norm_check=${result.normCheck.toExponential(3)}`);
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
}

process.exit(main(process.argv.slice(2)));
