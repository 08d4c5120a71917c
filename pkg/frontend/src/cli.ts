#!/usr/bin/env node
// Batch post-processing of solver outputs into figures and volume exports.
// Never recomputes dynamics; only pointwise algebra and rendering.

import { writeFileSync } from 'fs';
import * as path from 'path';

import {
  extractPlane,
  readKeyValues,
  readScalarVolume,
  readSnapshot,
  readStructureFactor,
  readTimeSeries,
  Volume,
} from './formats';
import { heatmap } from './heatmap';
import { stackedFigure } from './plot';
import { ScalarKind, scalarVolume } from './tensor';

function fail(msg: string): never {
  process.stderr.write(`error: ${msg}\n`);
  process.exit(1);
}

interface Args {
  positional: string[];
  options: Map<string, string>;
}

function parseArgs(argv: string[]): Args {
  const positional: string[] = [];
  const options = new Map<string, string>();
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i];
    if (a.startsWith('--')) {
      const key = a.slice(2);
      const val = argv[i + 1];
      if (val === undefined) fail(`missing value for --${key}`);
      options.set(key, val);
      i++;
    } else {
      positional.push(a);
    }
  }
  return { positional, options };
}

function cmdPlotTimeseries(args: Args): void {
  const [csvPath, outPath] = args.positional;
  if (!csvPath || !outPath) fail('usage: plot-timeseries <timeseries.csv> <out.png> [--meta run_meta.txt]');
  const ts = readTimeSeries(csvPath);
  const t = ts.column('t');
  const bounds = [];
  const metaPath = args.options.get('meta');
  if (metaPath) {
    const meta = readKeyValues(metaPath);
    const radius = meta.get('mbp_radius');
    if (radius !== undefined) bounds.push({ value: Number(radius), label: 'bound' });
  }
  const img = stackedFigure([
    {
      series: [{ x: t, y: ts.column('sup_norm'), color: [31, 119, 180] }],
      opts: { title: 'sup norm', bounds },
    },
    {
      series: [{ x: t, y: ts.column('energy'), color: [214, 39, 40] }],
      opts: { title: 'energy' },
    },
  ]);
  writeFileSync(outPath, img.encode());
  process.stdout.write(`wrote ${outPath} (${ts.rows.length} samples)\n`);
}

function loadField(vol: Volume, kind: string): { values: Float64Array; label: string } {
  if (kind !== 's' && kind !== 'beta_b') fail(`field must be s or beta_b, got ${kind}`);
  return { values: scalarVolume(vol, kind as ScalarKind), label: kind };
}

function cmdSlice(args: Args): void {
  const [snapPath, outPath] = args.positional;
  if (!snapPath || !outPath) {
    fail('usage: slice <snapshot.qt5> <out.png> --field s|beta_b --axis x|y|z --index i');
  }
  const vol = readSnapshot(snapPath);
  const axis = (args.options.get('axis') ?? 'z') as 'x' | 'y' | 'z';
  if (!['x', 'y', 'z'].includes(axis)) fail(`axis must be x, y or z, got ${axis}`);
  const index = Number(args.options.get('index') ?? 0);
  const { values, label } = loadField(vol, args.options.get('field') ?? 's');
  const scalar: Volume = {
    header: { ...vol.header, ncomp: 1 },
    data: values,
  };
  const plane = extractPlane(scalar, axis, index);
  const img = heatmap(plane.values, plane.width, plane.height, {
    title: `${label} ${axis}=${index}`,
  });
  writeFileSync(outPath, img.encode());
  process.stdout.write(`wrote ${outPath}\n`);
}

/** fftshift one axis index for centered reciprocal-space display */
function shiftIndex(i: number, n: number): number {
  return (i + Math.floor(n / 2)) % n;
}

export function logPlane(
  vol: Volume,
  plane: 'x' | 'y'
): { width: number; height: number; values: Float64Array } {
  const raw = extractPlane(vol, plane, 0); // k_axis = 0 plane
  const { width, height, values } = raw;
  const out = new Float64Array(values.length);
  for (let r = 0; r < height; r++) {
    for (let c = 0; c < width; c++) {
      const rs = shiftIndex(r, height);
      const cs = shiftIndex(c, width);
      out[rs * width + cs] = Math.log10(values[r * width + c] + 1e-16);
    }
  }
  return { width, height, values: out };
}

function cmdSfactorPlane(args: Args): void {
  const [sfPath, outPath] = args.positional;
  if (!sfPath || !outPath) fail('usage: sfactor-plane <sfactor.bin> <out.png> --plane x|y');
  const plane = (args.options.get('plane') ?? 'y') as 'x' | 'y';
  if (plane !== 'x' && plane !== 'y') fail(`plane must be x or y, got ${plane}`);
  const vol = readStructureFactor(sfPath);
  const data = logPlane(vol, plane);
  const img = heatmap(data.values, data.width, data.height, {
    title: `log10 s(k) ${plane}=0`,
  });
  writeFileSync(outPath, img.encode());
  process.stdout.write(`wrote ${outPath}\n`);
}

function cmdExportVolume(args: Args): void {
  const [snapPath, outBase] = args.positional;
  if (!snapPath || !outBase) {
    fail('usage: export-volume <snapshot.qt5> <outbase> --field s|beta_b');
  }
  const vol = readSnapshot(snapPath);
  const { values, label } = loadField(vol, args.options.get('field') ?? 's');
  const f32 = new Float32Array(values);
  const rawPath = `${outBase}.raw`;
  writeFileSync(rawPath, Buffer.from(f32.buffer));
  const meta = {
    field: label,
    dtype: 'float32',
    byte_order: 'little-endian',
    order: 'C (x slowest, z fastest)',
    nx: vol.header.nx,
    ny: vol.header.ny,
    nz: vol.header.nz,
    box: [vol.header.lx, vol.header.ly, vol.header.lz],
    time: vol.header.time,
    step: vol.header.step,
  };
  writeFileSync(`${outBase}.json`, JSON.stringify(meta, null, 2) + '\n');
  process.stdout.write(`wrote ${rawPath} and ${outBase}.json\n`);
}

function cmdRecheckScalars(args: Args): void {
  // cross-component consistency: recomputed scalars vs solver-exported ones
  const [snapPath, exportPath] = args.positional;
  if (!snapPath || !exportPath) {
    fail('usage: recheck-scalars <snapshot.qt5> <exported.bin> --field s|beta_b');
  }
  const vol = readSnapshot(snapPath);
  const { values } = loadField(vol, args.options.get('field') ?? 's');
  const exported = readScalarVolume(exportPath);
  if (exported.data.length !== values.length) fail('volume size mismatch');
  let worst = 0;
  for (let i = 0; i < values.length; i++) {
    worst = Math.max(worst, Math.abs(values[i] - exported.data[i]));
  }
  process.stdout.write(`max |recomputed - exported| = ${worst.toExponential(3)}\n`);
  if (worst > 1e-12) fail(`scalar mismatch ${worst} exceeds 1e-12: serialization bug`);
}

const COMMANDS: Record<string, (a: Args) => void> = {
  'plot-timeseries': cmdPlotTimeseries,
  slice: cmdSlice,
  'sfactor-plane': cmdSfactorPlane,
  'export-volume': cmdExportVolume,
  'recheck-scalars': cmdRecheckScalars,
};

export function main(argv: string[]): void {
  const [command, ...rest] = argv;
  const handler = command ? COMMANDS[command] : undefined;
  if (!handler) {
    fail(
      `usage: postproc <command> ...\ncommands: ${Object.keys(COMMANDS).join(', ')}`
    );
  }
  handler(parseArgs(rest));
}

if (require.main === module) {
  main(process.argv.slice(2));
}
