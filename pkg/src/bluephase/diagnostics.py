"""Observables on simulation states: energy, norms, eigenvalues, S(k).

All operations are read-only over the state field.  Reductions use NumPy's
pairwise summation in a fixed order, so values are independent of thread
count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import grid as sg
from . import kernels
from .grid import SpectralField, TensorField
from .params import ModelParams


@dataclass(frozen=True)
class StepDiagnostics:
    time: float
    step: int
    energy: float
    sup_norm: float
    l2_norm: float
    lambda_min: float
    lambda_max: float

    COLUMNS = ("step", "t", "energy", "sup_norm", "l2_norm", "lambda_min", "lambda_max")

    def row(self) -> tuple:
        return (
            self.step,
            self.time,
            self.energy,
            self.sup_norm,
            self.l2_norm,
            self.lambda_min,
            self.lambda_max,
        )


def elastic_energy_spectral(shat: SpectralField, p: ModelParams) -> float:
    """Gradient and chiral terms evaluated by Parseval in spectral space.

    The gradient term uses the full |k|^2 weight (matching the Laplacian
    symbol); the chiral term uses the Nyquist-zeroed curl symbol (matching
    the stepper), so the total is an exact Lyapunov function of the scheme.
    """
    g = shat.grid
    weight = g.cell_volume / g.npoints
    k2 = g.k_squared()
    grad2 = float(np.sum(k2 * sg.spectral_norm2_modes(shat)))

    kx, ky, kz = g.wavevectors()
    cf = g.curl_factor()
    d = shat.data
    full = np.empty((3, 3) + g.shape, dtype=complex)
    full[0, 0], full[1, 1] = d[0], d[1]
    full[2, 2] = -(d[0] + d[1])
    full[0, 1] = full[1, 0] = d[2]
    full[0, 2] = full[2, 0] = d[3]
    full[1, 2] = full[2, 1] = d[4]
    # rows of i k x_r Qhat, contracted against conj(Qhat)
    curl_dot = 0.0
    for r in range(3):
        crx = 1j * (ky * full[r, 2] - kz * full[r, 1])
        cry = 1j * (kz * full[r, 0] - kx * full[r, 2])
        crz = 1j * (kx * full[r, 1] - ky * full[r, 0])
        curl_dot += np.sum(
            cf
            * (
                np.conj(full[r, 0]) * crx
                + np.conj(full[r, 1]) * cry
                + np.conj(full[r, 2]) * crz
            )
        ).real
    return weight * (0.5 * p.L1 * grad2 + 0.5 * p.L4 * curl_dot)


def curl_term_physical(f: TensorField, p: ModelParams) -> float:
    """Chiral term via inverse transforms and the physical inner product.

    Cross-check route for the Parseval evaluation above (which saves the
    three inverse transforms per diagnostic step).
    """
    import scipy.fft as sfft

    g = f.grid
    shat = sg.forward(f)
    kx, ky, kz = g.wavevectors()
    cf = g.curl_factor()
    d = shat.data
    full = np.empty((3, 3) + g.shape, dtype=complex)
    full[0, 0], full[1, 1] = d[0], d[1]
    full[2, 2] = -(d[0] + d[1])
    full[0, 1] = full[1, 0] = d[2]
    full[0, 2] = full[2, 0] = d[3]
    full[1, 2] = full[2, 1] = d[4]
    curl_rows = np.empty_like(full)
    for r in range(3):
        curl_rows[r, 0] = cf * 1j * (ky * full[r, 2] - kz * full[r, 1])
        curl_rows[r, 1] = cf * 1j * (kz * full[r, 0] - kx * full[r, 2])
        curl_rows[r, 2] = cf * 1j * (kx * full[r, 1] - ky * full[r, 0])
    curl_phys = sfft.ifftn(curl_rows, axes=(2, 3, 4)).real
    qphys = sfft.ifftn(full, axes=(2, 3, 4)).real
    curl_dot = g.cell_volume * float(np.sum(qphys * curl_phys))
    return 0.5 * p.L4 * curl_dot


def bulk_energy(f: TensorField, p: ModelParams) -> float:
    """Pointwise bulk density integrated with the discrete inner product."""
    m = kernels.trace_q2_field(f.flat())
    tr_q3 = 3.0 * kernels.det_field(f.flat())
    dens = 0.5 * p.alpha * m - (p.beta / 3.0) * tr_q3 + 0.25 * p.gamma * m * m
    return f.grid.cell_volume * float(np.sum(dens))


def discrete_energy(f: TensorField, p: ModelParams) -> float:
    """Discrete free energy: spectral elastic terms plus pointwise bulk."""
    shat = sg.forward(f)
    return elastic_energy_spectral(shat, p) + bulk_energy(f, p)


def eigen_range(f: TensorField) -> tuple[float, float]:
    """Global (min, max) over grid points of the pointwise eigenvalues."""
    l1, _, l3 = kernels.sym3_eigenvalues(f.flat())
    return float(np.min(l1)), float(np.max(l3))


def order_parameter_field(f: TensorField) -> np.ndarray:
    """Scalar order parameter s = 1.5 * lambda_max at every point."""
    _, _, l3 = kernels.sym3_eigenvalues(f.flat())
    return (1.5 * l3).reshape(f.grid.shape)


def biaxiality_field(f: TensorField) -> np.ndarray:
    """Pointwise biaxiality in [0, 1] (0 below the degenerate floor).

    Written as plain correctly-rounded multiplies (no pow) so external
    consumers of exported scalars can reproduce the values bit-for-bit.
    """
    m = kernels.trace_q2_field(f.flat())
    tr_q3 = 3.0 * kernels.det_field(f.flat())
    small = m < 1e-24
    msafe = np.where(small, 1.0, m)
    val = 1.0 - 6.0 * tr_q3 * tr_q3 / (msafe * msafe * msafe)
    out = np.sqrt(np.clip(val, 0.0, 1.0))
    return np.where(small, 0.0, out).reshape(f.grid.shape)


def structure_factor(f: TensorField) -> np.ndarray:
    """Per-mode Hermitian Frobenius norm squared of the transform."""
    return sg.spectral_norm2_modes(sg.forward(f))


def collect(f: TensorField, p: ModelParams, step: int, time: float) -> StepDiagnostics:
    lmin, lmax = eigen_range(f)
    return StepDiagnostics(
        time=time,
        step=step,
        energy=discrete_energy(f, p),
        sup_norm=sg.sup_norm(f),
        l2_norm=sg.discrete_l2_norm(f),
        lambda_min=lmin,
        lambda_max=lmax,
    )
