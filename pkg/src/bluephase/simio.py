"""On-disk formats: binary field snapshots, scalar volumes, CSV time series.

Snapshots are a fixed little-endian header followed by raw float64 payload;
the header fully determines the payload length, round trips are bit-exact,
and the layout is trivially parseable by the post-processing tools.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .diagnostics import StepDiagnostics
from .grid import Grid, TensorField

SNAPSHOT_MAGIC = b"QT5SNAP\x00"
SCALAR_MAGIC = b"QTSCAL\x00\x00"
SFACTOR_MAGIC = b"QTSFAC\x00\x00"
FORMAT_VERSION = 1
_ENDIAN_TAG = 0x01020304

# magic(8s) version(u32) endian(u32) nx ny nz (u32 x3) lx ly lz (f64 x3)
# time(f64) step(u64) ncomp(u32) scalar_width(u32)
_HEADER = struct.Struct("<8sII3I3ddQII")


class SnapshotError(ValueError):
    pass


@dataclass(frozen=True)
class SnapshotMeta:
    grid: Grid
    time: float
    step: int
    ncomp: int


def _write_header(fh, magic: bytes, grid: Grid, time: float, step: int, ncomp: int):
    fh.write(
        _HEADER.pack(
            magic,
            FORMAT_VERSION,
            _ENDIAN_TAG,
            grid.nx,
            grid.ny,
            grid.nz,
            grid.lx,
            grid.ly,
            grid.lz,
            time,
            step,
            ncomp,
            8,
        )
    )


def _read_header(fh, magic: bytes, path) -> SnapshotMeta:
    raw = fh.read(_HEADER.size)
    if len(raw) < _HEADER.size:
        raise SnapshotError(f"{path}: truncated header")
    (got_magic, version, endian, nx, ny, nz, lx, ly, lz, time, step, ncomp, width) = (
        _HEADER.unpack(raw)
    )
    if got_magic != magic:
        raise SnapshotError(f"{path}: bad magic {got_magic!r}, expected {magic!r}")
    if version != FORMAT_VERSION:
        raise SnapshotError(f"{path}: unsupported format version {version}")
    if endian != _ENDIAN_TAG:
        raise SnapshotError(f"{path}: endianness marker mismatch")
    if width != 8:
        raise SnapshotError(f"{path}: unsupported scalar width {width}")
    grid = Grid(nx, ny, nz, lx, ly, lz, require_even=False)
    return SnapshotMeta(grid=grid, time=time, step=step, ncomp=ncomp)


def _read_payload(fh, meta: SnapshotMeta, path) -> np.ndarray:
    count = meta.ncomp * meta.grid.npoints
    data = np.fromfile(fh, dtype="<f8", count=count)
    if data.size != count:
        raise SnapshotError(f"{path}: truncated payload ({data.size}/{count} values)")
    return data.reshape((meta.ncomp,) + meta.grid.shape)


def write_snapshot(path, f: TensorField, time: float, step: int):
    with open(path, "wb") as fh:
        _write_header(fh, SNAPSHOT_MAGIC, f.grid, time, step, 5)
        np.ascontiguousarray(f.data, dtype="<f8").tofile(fh)


def read_snapshot(path) -> tuple[TensorField, SnapshotMeta]:
    with open(path, "rb") as fh:
        meta = _read_header(fh, SNAPSHOT_MAGIC, path)
        if meta.ncomp != 5:
            raise SnapshotError(f"{path}: snapshot must have 5 components, got {meta.ncomp}")
        data = _read_payload(fh, meta, path)
    return TensorField(meta.grid, np.ascontiguousarray(data)), meta


def write_scalar_volume(path, grid: Grid, values: np.ndarray, time: float, step: int,
                        magic: bytes = SCALAR_MAGIC):
    values = np.asarray(values)
    if values.shape != grid.shape:
        raise SnapshotError(f"scalar volume shape {values.shape} != grid {grid.shape}")
    with open(path, "wb") as fh:
        _write_header(fh, magic, grid, time, step, 1)
        np.ascontiguousarray(values, dtype="<f8").tofile(fh)


def read_scalar_volume(path, magic: bytes = SCALAR_MAGIC) -> tuple[np.ndarray, SnapshotMeta]:
    with open(path, "rb") as fh:
        meta = _read_header(fh, magic, path)
        if meta.ncomp != 1:
            raise SnapshotError(f"{path}: expected 1 component, got {meta.ncomp}")
        data = _read_payload(fh, meta, path)
    return data[0], meta


def write_structure_factor(path, grid: Grid, values: np.ndarray, time: float, step: int):
    write_scalar_volume(path, grid, values, time, step, magic=SFACTOR_MAGIC)


def read_structure_factor(path) -> tuple[np.ndarray, SnapshotMeta]:
    return read_scalar_volume(path, magic=SFACTOR_MAGIC)


class TimeSeriesWriter:
    """CSV time series: one header line, full 17-significant-digit floats."""

    def __init__(self, path):
        self.path = path
        self._fh = open(path, "w")
        self._fh.write(",".join(StepDiagnostics.COLUMNS) + "\n")

    def write(self, d: StepDiagnostics):
        step, *vals = d.row()
        self._fh.write(str(step) + "," + ",".join(f"{v:.17g}" for v in vals) + "\n")
        self._fh.flush()

    def close(self):
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_timeseries(path) -> dict[str, np.ndarray]:
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    if header != list(StepDiagnostics.COLUMNS):
        raise SnapshotError(f"{path}: unexpected time-series columns {header}")
    if any(len(r) != len(header) for r in rows):
        raise SnapshotError(f"{path}: ragged time-series rows")
    cols = np.array(rows, dtype=float).T if rows else np.empty((len(header), 0))
    return {name: cols[i] for i, name in enumerate(header)}


def write_key_values(path, mapping: dict):
    with open(path, "w") as fh:
        for key, val in mapping.items():
            if isinstance(val, float):
                fh.write(f"{key} = {val:.17g}\n")
            else:
                fh.write(f"{key} = {val}\n")


def read_key_values(path) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise SnapshotError(f"{path}: malformed line {line!r}")
            key, val = line.split("=", 1)
            out[key.strip()] = val.strip()
    return out
