"""phi-functions and their application through the helical-basis cache.

phi0(z) = exp(z), phi1(z) = (exp(z)-1)/z, phi2(z) = (exp(z)-1-z)/z2 with the
limits 1, 1, 1/2 at z = 0.  Since every operator eigenvalue satisfies
lambda <= -kappa1 < 0 in practice, no overflow guard is needed; underflow of
exp to zero just means the mode is fully damped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .grid import SpectralField, TensorField
from .hstf import LinearOperator
from .params import StabilizedParams

# closed forms lose digits to cancellation below this; the Taylor branch
# takes over (terms through z^8, so both branches agree to ~1e-15 at the seam)
_TAYLOR_CUT = 0.05

_PHI1_COEFFS = np.array([1.0 / math.factorial(k + 1) for k in range(9)][::-1])
_PHI2_COEFFS = np.array([1.0 / math.factorial(k + 2) for k in range(9)][::-1])


def _phi1_closed(z):
    return np.expm1(z) / z


def _phi2_closed(z):
    return (np.expm1(z) - z) / (z * z)


def phi(gamma: int, z):
    """phi_gamma evaluated elementwise (scalar in, scalar out)."""
    z = np.asarray(z, dtype=float)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    if gamma == 0:
        out = np.exp(z)
    elif gamma in (1, 2):
        coeffs = _PHI1_COEFFS if gamma == 1 else _PHI2_COEFFS
        small = np.abs(z) < _TAYLOR_CUT
        zsafe = np.where(small, 1.0, z)
        closed = _phi1_closed(zsafe) if gamma == 1 else _phi2_closed(zsafe)
        out = np.where(small, np.polyval(coeffs, z), closed)
    else:
        raise ValueError(f"phi order must be 0, 1 or 2, got {gamma}")
    return float(out[0]) if scalar else out


@dataclass
class PhiTable:
    """phi_gamma(tau * lambda) for every mode and helicity, at fixed tau.

    Rebuilt only when tau changes; parameter sweeps own that rebuild
    explicitly instead of caching per-tau tables.
    """

    op: LinearOperator
    tau: float
    phi0: np.ndarray  # (M, 5)
    phi1: np.ndarray
    phi2: np.ndarray

    @classmethod
    def build(cls, op: LinearOperator, tau: float) -> "PhiTable":
        if tau <= 0:
            raise ValueError(f"time step must be positive, got {tau}")
        z = tau * op.lam
        return cls(op=op, tau=tau, phi0=np.exp(z), phi1=phi(1, z), phi2=phi(2, z))

    def check(self, tau: float):
        if tau != self.tau:
            raise ValueError(f"phi table built for tau={self.tau}, called with {tau}")


def apply_phi(gamma: int, tau: float, s: SpectralField, phis: PhiTable) -> SpectralField:
    """phi_gamma(tau L) applied to a spectral field via the helical basis.

    Per mode: project onto the basis, scale coefficient j by
    phi_gamma(tau lambda_j), reconstruct.  The k = 0 mode works through the
    same path because its multiplier is scalar there.
    """
    phis.check(tau)
    if s.grid != phis.op.grid:
        raise ValueError("spectral field and phi table live on different grids")
    table = {0: phis.phi0, 1: phis.phi1, 2: phis.phi2}[gamma]
    out = kernels.apply_phi_modes(phis.op.table.U, table, s.flat())
    return SpectralField(s.grid, out.reshape(s.data.shape))


def nonlinear(f: TensorField, p: StabilizedParams, out: TensorField | None = None) -> TensorField:
    """Stabilized nonlinear operator: bulk force plus (kappa1+kappa2) Q."""
    if out is None:
        out = TensorField(f.grid, np.empty_like(f.data))
    m = p.model
    kernels.bulk_force_field(
        f.flat(), m.alpha, m.beta, m.gamma, p.kappa_total, out=out.flat()
    )
    return out


def bulk_force_field(f: TensorField, p) -> TensorField:
    """Plain bulk force field (no stabilization shift)."""
    out = TensorField(f.grid, np.empty_like(f.data))
    kernels.bulk_force_field(f.flat(), p.alpha, p.beta, p.gamma, 0.0, out=out.flat())
    return out
