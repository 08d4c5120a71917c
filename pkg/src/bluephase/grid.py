"""Periodic grid, wavevector bookkeeping and tensor-field transforms.

The DFT convention is the unnormalized forward sum with the 1/(Nx Ny Nz)
factor on the inverse, so spectral symbols can be used verbatim.  Wavevector
components are pi*n/X with n running over the FFT index set that keeps +N/2
and drops -N/2.  First-derivative (curl) symbols are forced to zero on any
mode carrying a Nyquist index so real fields stay real; the Laplacian, an
even symbol, keeps its Nyquist value.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.fft as sfft

from . import kernels

# max |imag| after an inverse transform, relative to the field scale, before
# we flag broken Hermitian symmetry upstream; loose enough for round-off
# accumulation at N=128, tight enough to catch symbol sign bugs
_IMAG_TOL = 1e-8


class RealityError(ValueError):
    """Inverse transform produced a significantly complex field."""


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on a box of side lengths (lx, ly, lz)."""

    nx: int
    ny: int
    nz: int
    lx: float = 2.0 * np.pi
    ly: float = 2.0 * np.pi
    lz: float = 2.0 * np.pi
    # odd sizes are allowed only for the tiny oracle grids
    require_even: bool = field(default=True, compare=False)

    def __post_init__(self):
        for n in (self.nx, self.ny, self.nz):
            if n < 2:
                raise ValueError(f"grid size must be >= 2, got {n}")
            if self.require_even and n % 2:
                raise ValueError(f"grid size must be even, got {n}")
        if min(self.lx, self.ly, self.lz) <= 0:
            raise ValueError("box lengths must be positive")

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.nx, self.ny, self.nz)

    @property
    def npoints(self) -> int:
        return self.nx * self.ny * self.nz

    @property
    def spacings(self) -> tuple[float, float, float]:
        return (self.lx / self.nx, self.ly / self.ny, self.lz / self.nz)

    @property
    def cell_volume(self) -> float:
        hx, hy, hz = self.spacings
        return hx * hy * hz

    def axis_coords(self, d: int) -> np.ndarray:
        n = self.shape[d]
        length = (self.lx, self.ly, self.lz)[d]
        return np.arange(n) * (length / n)

    def meshgrid(self):
        return np.meshgrid(
            self.axis_coords(0), self.axis_coords(1), self.axis_coords(2), indexing="ij"
        )

    def axis_wavenumbers(self, d: int) -> np.ndarray:
        """Wavevector component per FFT index along axis d (keeps +N/2)."""
        n = self.shape[d]
        length = (self.lx, self.ly, self.lz)[d]
        idx = np.fft.fftfreq(n, d=1.0 / n)  # integers 0..N/2-1, -N/2..-1
        if n % 2 == 0:
            idx = idx.copy()
            idx[n // 2] = n // 2  # paper index set keeps +N/2, not -N/2
        return idx * (2.0 * np.pi / length)

    def wavevectors(self):
        """Broadcastable (kx, ky, kz) arrays over the full mode set."""
        kx = self.axis_wavenumbers(0)[:, None, None]
        ky = self.axis_wavenumbers(1)[None, :, None]
        kz = self.axis_wavenumbers(2)[None, None, :]
        return kx, ky, kz

    def k_squared(self) -> np.ndarray:
        kx, ky, kz = self.wavevectors()
        return kx**2 + ky**2 + kz**2

    def nyquist_mask(self) -> np.ndarray:
        """True on modes with a Nyquist index in any direction."""
        mask = np.zeros(self.shape, dtype=bool)
        if self.nx % 2 == 0:
            mask[self.nx // 2, :, :] = True
        if self.ny % 2 == 0:
            mask[:, self.ny // 2, :] = True
        if self.nz % 2 == 0:
            mask[:, :, self.nz // 2] = True
        return mask

    def curl_factor(self) -> np.ndarray:
        """1.0 where the curl symbol applies, 0.0 on Nyquist-carrying modes."""
        return np.where(self.nyquist_mask(), 0.0, 1.0)

    def dealias_mask(self) -> np.ndarray:
        """Spherical 2/3-rule mask (True = keep)."""
        nx2, ny2, nz2 = self.nx / 2.0, self.ny / 2.0, self.nz / 2.0
        ix = np.fft.fftfreq(self.nx, 1.0 / self.nx)[:, None, None]
        iy = np.fft.fftfreq(self.ny, 1.0 / self.ny)[None, :, None]
        iz = np.fft.fftfreq(self.nz, 1.0 / self.nz)[None, None, :]
        if self.nx % 2 == 0:
            ix = ix.copy()
            ix[self.nx // 2] = nx2
        if self.ny % 2 == 0:
            iy = iy.copy()
            iy[0, self.ny // 2] = ny2
        if self.nz % 2 == 0:
            iz = iz.copy()
            iz[0, 0, self.nz // 2] = nz2
        r2 = (ix / nx2) ** 2 + (iy / ny2) ** 2 + (iz / nz2) ** 2
        return r2 <= (2.0 / 3.0) ** 2


@dataclass
class TensorField:
    """Real Q-tensor field: 5 component arrays over the grid.

    Safe to hand between threads; concurrent mutation of one instance is
    not supported.
    """

    grid: Grid
    data: np.ndarray  # (5, nx, ny, nz) float64

    @classmethod
    def zeros(cls, grid: Grid) -> "TensorField":
        return cls(grid, np.zeros((5,) + grid.shape))

    @classmethod
    def from_components(cls, grid: Grid, comps) -> "TensorField":
        data = np.ascontiguousarray(np.stack(comps).astype(float))
        if data.shape != (5,) + grid.shape:
            raise ValueError(f"component shape mismatch: {data.shape}")
        return cls(grid, data)

    def copy(self) -> "TensorField":
        return TensorField(self.grid, self.data.copy())

    def flat(self) -> np.ndarray:
        return self.data.reshape(5, -1)


@dataclass
class SpectralField:
    """Fourier coefficients of a TensorField over the full mode set."""

    grid: Grid
    data: np.ndarray  # (5, nx, ny, nz) complex128

    @classmethod
    def zeros(cls, grid: Grid) -> "SpectralField":
        return cls(grid, np.zeros((5,) + grid.shape, dtype=complex))

    def copy(self) -> "SpectralField":
        return SpectralField(self.grid, self.data.copy())

    def flat(self) -> np.ndarray:
        return self.data.reshape(5, -1)


_workers: int | None = None


def set_fft_workers(n: int | None):
    """Thread count for the batched transforms (None = sequential)."""
    global _workers
    _workers = n if (n is None or n > 1) else None


def get_fft_workers() -> int | None:
    return _workers


def forward(f: TensorField) -> SpectralField:
    """Component-wise unnormalized forward DFT."""
    data = sfft.fftn(f.data, axes=(1, 2, 3), workers=_workers)
    return SpectralField(f.grid, data)


def inverse(s: SpectralField) -> TensorField:
    """Inverse DFT; discards the imaginary residual after checking it."""
    data = sfft.ifftn(s.data, axes=(1, 2, 3), workers=_workers)
    re = data.real
    imag_max = float(np.max(np.abs(data.imag)))
    if imag_max > 1e-14:
        scale = float(np.max(np.abs(re)))
        if imag_max > _IMAG_TOL * max(scale, 1e-300):
            raise RealityError(
                f"imaginary residual {imag_max:g} exceeds {_IMAG_TOL:g} x field "
                f"magnitude {scale:g}; Hermitian symmetry broken upstream"
            )
    return TensorField(s.grid, np.ascontiguousarray(re))


def laplacian_symbol(grid: Grid, k_index: tuple[int, int, int]) -> float:
    """-|k|^2 at a single mode index."""
    kx = grid.axis_wavenumbers(0)[k_index[0]]
    ky = grid.axis_wavenumbers(1)[k_index[1]]
    kz = grid.axis_wavenumbers(2)[k_index[2]]
    return -(kx * kx + ky * ky + kz * kz)


def curl_rowwise_mode(k, mode, curl_factor: float = 1.0) -> np.ndarray:
    """Row-wise curl symbol i k x_r M on one full 3x3 mode."""
    k = np.asarray(k, dtype=float)
    mode = np.asarray(mode, dtype=complex)
    out = np.empty_like(mode)
    for r in range(3):
        out[r] = 1j * np.cross(k, mode[r])
    return curl_factor * out


def curl_rowwise(s: SpectralField, k_index: tuple[int, int, int]) -> np.ndarray:
    """Curl symbol applied to one mode of a spectral field (full 3x3 out)."""
    g = s.grid
    k = (
        g.axis_wavenumbers(0)[k_index[0]],
        g.axis_wavenumbers(1)[k_index[1]],
        g.axis_wavenumbers(2)[k_index[2]],
    )
    q11, q22, q12, q13, q23 = s.data[(slice(None),) + tuple(k_index)]
    mode = np.array(
        [[q11, q12, q13], [q12, q22, q23], [q13, q23, -(q11 + q22)]], dtype=complex
    )
    factor = 0.0 if g.nyquist_mask()[k_index] else 1.0
    return curl_rowwise_mode(k, mode, factor)


def frob_norm2_field(f: TensorField) -> np.ndarray:
    """Pointwise squared Frobenius norm as a scalar grid array."""
    return kernels.trace_q2_field(f.flat()).reshape(f.grid.shape)


def discrete_l2_dot(a: TensorField, b: TensorField) -> float:
    """hx hy hz * sum over points of the pointwise Frobenius inner product."""
    if a.grid != b.grid:
        raise ValueError("fields live on different grids")
    pa, pb = a.data, b.data
    s = (
        2.0 * (pa[0] * pb[0] + pa[1] * pb[1])
        + pa[0] * pb[1]
        + pa[1] * pb[0]
        + 2.0 * (pa[2] * pb[2] + pa[3] * pb[3] + pa[4] * pb[4])
    )
    return a.grid.cell_volume * float(np.sum(s))


def discrete_l2_norm(f: TensorField) -> float:
    return float(np.sqrt(max(0.0, discrete_l2_dot(f, f))))


def sup_norm(f: TensorField) -> float:
    """Max over grid points of the pointwise Frobenius norm."""
    return float(np.sqrt(np.max(kernels.trace_q2_field(f.flat()))))


def spectral_norm2_modes(s: SpectralField) -> np.ndarray:
    """Hermitian Frobenius norm squared per mode (full 9-entry tensor)."""
    d = s.data
    a0, a1 = np.abs(d[0]) ** 2, np.abs(d[1]) ** 2
    cross = 2.0 * np.real(d[0] * np.conj(d[1]))
    off = np.abs(d[2]) ** 2 + np.abs(d[3]) ** 2 + np.abs(d[4]) ** 2
    return 2.0 * (a0 + a1) + cross + 2.0 * off
