// Pointwise scalars derived from the 5 stored Q-tensor components.
//
// These mirror the solver's formulas operation for operation (same
// association order, plain correctly-rounded multiplies), so recomputed
// values agree with solver-exported scalar volumes to the last bits except
// where a transcendental differs by an ulp.  Any disagreement beyond 1e-12
// indicates a serialization bug, not a numerical one.

import { Volume } from './formats';

const ISO_FLOOR = 1e-28;
const BIAX_FLOOR = 1e-24;

export interface Q5 {
  q11: number;
  q22: number;
  q12: number;
  q13: number;
  q23: number;
}

export function traceQ2(q: Q5): number {
  return (
    q.q11 * q.q11 +
    q.q22 * q.q22 +
    (q.q11 + q.q22) * (q.q11 + q.q22) +
    2.0 * (q.q12 * q.q12 + q.q13 * q.q13 + q.q23 * q.q23)
  );
}

export function det3(q: Q5): number {
  const q33 = -(q.q11 + q.q22);
  return (
    q.q11 * (q.q22 * q33 - q.q23 * q.q23) -
    q.q12 * (q.q12 * q33 - q.q23 * q.q13) +
    q.q13 * (q.q12 * q.q23 - q.q22 * q.q13)
  );
}

/** Scalar order parameter: 1.5 times the largest eigenvalue. */
export function scalarOrder(q: Q5): number {
  const tr2 = traceQ2(q);
  if (tr2 < ISO_FLOOR) return 0.0;
  const det = det3(q);
  const p = Math.sqrt(tr2 / 6.0);
  let arg = det / (2.0 * p * p * p);
  if (arg > 1.0) arg = 1.0;
  else if (arg < -1.0) arg = -1.0;
  const ct = Math.cos(Math.acos(arg) / 3.0);
  const l3 = 2.0 * p * ct;
  return 1.5 * l3;
}

/** Biaxiality in [0, 1]; exactly 0 below the degenerate floor. */
export function biaxiality(q: Q5): number {
  const m = traceQ2(q);
  if (m < BIAX_FLOOR) return 0.0;
  const trQ3 = 3.0 * det3(q);
  let val = 1.0 - (6.0 * trQ3 * trQ3) / (m * m * m);
  if (val < 0.0) val = 0.0;
  else if (val > 1.0) val = 1.0;
  return Math.sqrt(val);
}

export function pointAt(vol: Volume, ix: number, iy: number, iz: number): Q5 {
  const { nx, ny, nz } = vol.header;
  const stride = nx * ny * nz;
  const base = (ix * ny + iy) * nz + iz;
  return {
    q11: vol.data[base],
    q22: vol.data[stride + base],
    q12: vol.data[2 * stride + base],
    q13: vol.data[3 * stride + base],
    q23: vol.data[4 * stride + base],
  };
}

export type ScalarKind = 's' | 'beta_b';

/** Derived scalar over the whole snapshot, C-order [ix][iy][iz]. */
export function scalarVolume(vol: Volume, kind: ScalarKind): Float64Array {
  const { nx, ny, nz } = vol.header;
  const fn = kind === 's' ? scalarOrder : biaxiality;
  const out = new Float64Array(nx * ny * nz);
  let i = 0;
  for (let ix = 0; ix < nx; ix++)
    for (let iy = 0; iy < ny; iy++)
      for (let iz = 0; iz < nz; iz++) out[i++] = fn(pointAt(vol, ix, iy, iz));
  return out;
}
