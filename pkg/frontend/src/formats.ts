// Readers for the simulation's on-disk formats: fixed-header little-endian
// binaries (snapshots, scalar volumes, structure factors), the CSV time
// series and key=value metadata files.

import { readFileSync } from 'fs';

export const SNAPSHOT_MAGIC = 'QT5SNAP\0';
export const SCALAR_MAGIC = 'QTSCAL\0\0';
export const SFACTOR_MAGIC = 'QTSFAC\0\0';

const HEADER_SIZE = 76;
const ENDIAN_TAG = 0x01020304;

export interface VolumeHeader {
  magic: string;
  version: number;
  nx: number;
  ny: number;
  nz: number;
  lx: number;
  ly: number;
  lz: number;
  time: number;
  step: number;
  ncomp: number;
}

export interface Volume {
  header: VolumeHeader;
  /** component-major C-order data: index = ((c*nx + ix)*ny + iy)*nz + iz */
  data: Float64Array;
}

export function readVolume(path: string, expectedMagic?: string): Volume {
  const buf = readFileSync(path);
  if (buf.length < HEADER_SIZE) {
    throw new Error(`${path}: truncated header (${buf.length} bytes)`);
  }
  const magic = buf.toString('latin1', 0, 8);
  if (expectedMagic !== undefined && magic !== expectedMagic) {
    throw new Error(`${path}: bad magic ${JSON.stringify(magic)}`);
  }
  const version = buf.readUInt32LE(8);
  if (version !== 1) throw new Error(`${path}: unsupported format version ${version}`);
  if (buf.readUInt32LE(12) !== ENDIAN_TAG) {
    throw new Error(`${path}: endianness marker mismatch`);
  }
  const header: VolumeHeader = {
    magic,
    version,
    nx: buf.readUInt32LE(16),
    ny: buf.readUInt32LE(20),
    nz: buf.readUInt32LE(24),
    lx: buf.readDoubleLE(28),
    ly: buf.readDoubleLE(36),
    lz: buf.readDoubleLE(44),
    time: buf.readDoubleLE(52),
    step: Number(buf.readBigUInt64LE(60)),
    ncomp: buf.readUInt32LE(68),
  };
  const width = buf.readUInt32LE(72);
  if (width !== 8) throw new Error(`${path}: unsupported scalar width ${width}`);
  const count = header.ncomp * header.nx * header.ny * header.nz;
  if (buf.length < HEADER_SIZE + count * 8) {
    throw new Error(`${path}: truncated payload`);
  }
  // copy so alignment of the source buffer never matters
  const data = new Float64Array(count);
  for (let i = 0; i < count; i++) data[i] = buf.readDoubleLE(HEADER_SIZE + 8 * i);
  return { header, data };
}

export function readSnapshot(path: string): Volume {
  const vol = readVolume(path, SNAPSHOT_MAGIC);
  if (vol.header.ncomp !== 5) {
    throw new Error(`${path}: snapshot must carry 5 components`);
  }
  return vol;
}

export function readScalarVolume(path: string): Volume {
  const vol = readVolume(path, SCALAR_MAGIC);
  if (vol.header.ncomp !== 1) throw new Error(`${path}: expected one component`);
  return vol;
}

export function readStructureFactor(path: string): Volume {
  const vol = readVolume(path, SFACTOR_MAGIC);
  if (vol.header.ncomp !== 1) throw new Error(`${path}: expected one component`);
  return vol;
}

export interface TimeSeries {
  columns: string[];
  rows: number[][];
  column(name: string): number[];
}

export function readTimeSeries(path: string): TimeSeries {
  const text = readFileSync(path, 'utf8');
  const lines = text.split('\n').filter((l) => l.trim().length > 0);
  if (lines.length === 0) throw new Error(`${path}: empty time series`);
  const columns = lines[0].split(',').map((s) => s.trim());
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(',');
    if (parts.length !== columns.length) {
      throw new Error(`${path}: row ${i} has ${parts.length} fields, expected ${columns.length}`);
    }
    const row = parts.map((p) => {
      const v = Number(p);
      if (!Number.isFinite(v)) throw new Error(`${path}: bad value ${p} in row ${i}`);
      return v;
    });
    rows.push(row);
  }
  for (let i = 1; i < rows.length; i++) {
    if (rows[i][0] <= rows[i - 1][0]) throw new Error(`${path}: step index not increasing`);
  }
  return {
    columns,
    rows,
    column(name: string): number[] {
      const j = columns.indexOf(name);
      if (j < 0) throw new Error(`${path}: missing column ${name}`);
      return rows.map((r) => r[j]);
    },
  };
}

export function readKeyValues(path: string): Map<string, string> {
  const out = new Map<string, string>();
  for (const raw of readFileSync(path, 'utf8').split('\n')) {
    const line = raw.split('#')[0].trim();
    if (!line) continue;
    const eq = line.indexOf('=');
    if (eq < 0) throw new Error(`${path}: malformed line ${JSON.stringify(raw)}`);
    out.set(line.slice(0, eq).trim(), line.slice(eq + 1).trim());
  }
  return out;
}

/** Extract an axis-normal plane from a single-component volume. */
export function extractPlane(
  vol: Volume,
  axis: 'x' | 'y' | 'z',
  index: number
): { width: number; height: number; values: Float64Array } {
  const { nx, ny, nz } = vol.header;
  const limit = axis === 'x' ? nx : axis === 'y' ? ny : nz;
  if (index < 0 || index >= limit) {
    throw new Error(`plane index ${index} out of range [0, ${limit})`);
  }
  const at = (ix: number, iy: number, iz: number) => vol.data[(ix * ny + iy) * nz + iz];
  if (axis === 'x') {
    const values = new Float64Array(ny * nz);
    for (let iy = 0; iy < ny; iy++)
      for (let iz = 0; iz < nz; iz++) values[iy * nz + iz] = at(index, iy, iz);
    return { width: nz, height: ny, values };
  }
  if (axis === 'y') {
    const values = new Float64Array(nx * nz);
    for (let ix = 0; ix < nx; ix++)
      for (let iz = 0; iz < nz; iz++) values[ix * nz + iz] = at(ix, index, iz);
    return { width: nz, height: nx, values };
  }
  const values = new Float64Array(nx * ny);
  for (let ix = 0; ix < nx; ix++)
    for (let iy = 0; iy < ny; iy++) values[ix * ny + iy] = at(ix, iy, index);
  return { width: ny, height: nx, values };
}
