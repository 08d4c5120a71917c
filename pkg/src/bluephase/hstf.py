"""Helical symmetric trace-free basis per wavevector.

For every k != 0 a local frame {e1, e2, khat} is built by Gram-Schmidt from
a fixed seed, the complex transverse vectors m+/- = (e1 +- i e2)/sqrt(2)
follow, and the five basis tensors

    T0      = (I - 3 khat x khat) / sqrt(6)
    T(+-1)  = (m+- x khat + khat x m+-) / sqrt(2)
    T(+-2)  = m+- x m+-

simultaneously diagonalize the Laplacian symbol and the symmetrized curl
symbol: C(k) T_j = c_j |k| T_j with c = (0, +1, -1, +2, -2).  The sign
pairing of the chiral shift is fixed by direct verification against the
dense symbol at table construction, not by notation.

Grid-level work is cached as one unitary 5x5 matrix per mode mapping fixed
orthonormal trace-free coordinates to basis coefficients; that turns every
operator-exponential application into a batched small-matrix contraction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .grid import Grid
from .params import StabilizedParams

# reordering of |helicity| labels to array rows
CURL_COEFFS = np.array([0.0, 1.0, -1.0, 2.0, -2.0])

# seed is swapped once its projection on khat gets too large, keeping the
# Gram-Schmidt residual well conditioned (norm >= sqrt(1 - 0.81))
_SEED_SWAP = 0.9

# fixed orthonormal basis of the symmetric trace-free subspace, Frobenius
# inner product; also the coordinate system of the dense oracle
STF_BASIS = np.zeros((5, 3, 3))
STF_BASIS[0] = np.diag([1.0, -1.0, 0.0]) / np.sqrt(2.0)
STF_BASIS[1] = np.diag([1.0, 1.0, -2.0]) / np.sqrt(6.0)
STF_BASIS[2, 0, 1] = STF_BASIS[2, 1, 0] = 1.0 / np.sqrt(2.0)
STF_BASIS[3, 0, 2] = STF_BASIS[3, 2, 0] = 1.0 / np.sqrt(2.0)
STF_BASIS[4, 1, 2] = STF_BASIS[4, 2, 1] = 1.0 / np.sqrt(2.0)
STF_BASIS.flags.writeable = False


@dataclass(frozen=True)
class LocalFrame:
    e1: np.ndarray
    e2: np.ndarray
    khat: np.ndarray


def local_frame(k) -> LocalFrame:
    """Right-handed orthonormal frame adapted to k (rejects k = 0)."""
    k = np.asarray(k, dtype=float)
    norm = np.linalg.norm(k)
    if norm == 0.0:
        raise ValueError("no local frame exists at k = 0")
    khat = k / norm
    seed = np.array([1.0, 0.0, 0.0])
    if abs(seed @ khat) > _SEED_SWAP:
        seed = np.array([0.0, 1.0, 0.0])
    e1 = seed - (seed @ khat) * khat
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(khat, e1)
    return LocalFrame(e1=e1, e2=e2, khat=khat)


def helicity_vectors(frame: LocalFrame) -> tuple[np.ndarray, np.ndarray]:
    """Complex transverse vectors with k x m+- = -+ i|k| m+-."""
    m_plus = (frame.e1 + 1j * frame.e2) / np.sqrt(2.0)
    return m_plus, np.conj(m_plus)


def hstf_tensors(frame: LocalFrame) -> np.ndarray:
    """The five basis tensors, shape (5, 3, 3), rows ordered as CURL_COEFFS."""
    khat = frame.khat
    m_plus, m_minus = helicity_vectors(frame)
    t = np.empty((5, 3, 3), dtype=complex)
    t[0] = (np.eye(3) - 3.0 * np.outer(khat, khat)) / np.sqrt(6.0)
    t[1] = (np.outer(m_plus, khat) + np.outer(khat, m_plus)) / np.sqrt(2.0)
    t[2] = np.conj(t[1])
    t[3] = np.outer(m_plus, m_plus)
    t[4] = np.conj(t[3])
    return t


def operator_eigenvalues(k, p: StabilizedParams) -> np.ndarray:
    """Eigenvalues of the linear-operator symbol, rows ordered as CURL_COEFFS.

    The chiral term contributes -(L4/2) * c_j * |k| with c_j the verified
    curl eigenvalue of basis row j; at k = 0 all five collapse to
    -(kappa1 + kappa2).
    """
    norm = float(np.linalg.norm(np.asarray(k, dtype=float)))
    m = p.model
    return -m.L1 * norm**2 - 0.5 * m.L4 * CURL_COEFFS * norm - p.kappa_total


def project(mode, tensors) -> np.ndarray:
    """Hermitian Frobenius coefficients of a full 3x3 mode in the basis."""
    mode = np.asarray(mode, dtype=complex)
    return np.einsum("st,jst->j", mode, np.conj(tensors))


def reconstruct(coeffs, tensors) -> np.ndarray:
    """Sum of coefficients times basis tensors (inverse of project)."""
    return np.einsum("j,jst->st", np.asarray(coeffs, dtype=complex), tensors)


def _chunked_basis_matrices(kx, ky, kz, chunk=1 << 16):
    """Per-mode unitary U with U[j, l] = <E_l, T_j>_F, identity at k = 0."""
    M = kx.size
    U = np.empty((M, 5, 5), dtype=complex)
    E = STF_BASIS
    for start in range(0, M, chunk):
        sl = slice(start, min(start + chunk, M))
        kv = np.stack([kx[sl], ky[sl], kz[sl]], axis=1)
        norm = np.linalg.norm(kv, axis=1)
        zero = norm == 0.0
        safe = np.where(zero, 1.0, norm)
        khat = kv / safe[:, None]
        swap = np.abs(khat[:, 0]) > _SEED_SWAP
        seed = np.zeros_like(khat)
        seed[:, 0] = ~swap
        seed[:, 1] = swap
        e1 = seed - np.sum(seed * khat, axis=1)[:, None] * khat
        e1n = np.linalg.norm(e1, axis=1)
        e1 /= np.where(zero, 1.0, e1n)[:, None]
        e2 = np.cross(khat, e1)
        mp = (e1 + 1j * e2) / np.sqrt(2.0)

        t = np.empty((sl.stop - sl.start, 5, 3, 3), dtype=complex)
        t[:, 0] = (np.eye(3) - 3.0 * khat[:, :, None] * khat[:, None, :]) / np.sqrt(6.0)
        t[:, 1] = (mp[:, :, None] * khat[:, None, :] + khat[:, :, None] * mp[:, None, :]) / np.sqrt(2.0)
        t[:, 2] = np.conj(t[:, 1])
        t[:, 3] = mp[:, :, None] * mp[:, None, :]
        t[:, 4] = np.conj(t[:, 3])

        U[sl] = np.einsum("mjst,lst->mjl", np.conj(t), E)
        if np.any(zero):
            U[sl][zero] = np.eye(5)
    return U


class HstfTable:
    """Per-grid cache: basis change matrices and curl data for every mode.

    Immutable after construction; frame construction is embarrassingly
    parallel over wavevectors but cheap enough to vectorize in one pass.
    """

    def __init__(self, grid: Grid):
        self.grid = grid
        kx, ky, kz = grid.wavevectors()
        kxf = np.broadcast_to(kx, grid.shape).reshape(-1)
        kyf = np.broadcast_to(ky, grid.shape).reshape(-1)
        kzf = np.broadcast_to(kz, grid.shape).reshape(-1)
        self.knorm = np.sqrt(kxf**2 + kyf**2 + kzf**2)
        # curl symbol vanishes on Nyquist-carrying modes
        self.curl_knorm = self.knorm * grid.curl_factor().reshape(-1)
        self.U = _chunked_basis_matrices(kxf, kyf, kzf)
        self._verify_assignment()

    def eigenvalues(self, p: StabilizedParams) -> np.ndarray:
        """(M, 5) operator eigenvalues honoring the Nyquist curl convention."""
        m = p.model
        return (
            -m.L1 * self.knorm[:, None] ** 2
            - 0.5 * m.L4 * self.curl_knorm[:, None] * CURL_COEFFS[None, :]
            - p.kappa_total
        )

    def _verify_assignment(self):
        """Check the curl eigen-relation per basis row on sample directions.

        Establishes the helicity-to-row pairing empirically instead of
        trusting a sign convention.
        """
        rng = np.random.default_rng(12345)
        samples = [
            np.array([0.0, 0.0, 1.0]),
            np.array([1.0, 0.0, 0.0]),
            np.array([0.0, 2.0, 0.0]),
            np.array([1.0, 2.0, 2.0]),
        ]
        samples += list(rng.normal(size=(4, 3)))
        for k in samples:
            frame = local_frame(k)
            tensors = hstf_tensors(frame)
            norm = np.linalg.norm(k)
            for j in range(5):
                got = _curl_symbol(k, tensors[j])
                want = CURL_COEFFS[j] * norm * tensors[j]
                if np.max(np.abs(got - want)) > 1e-10 * max(norm, 1.0):
                    raise AssertionError(
                        f"curl eigen-relation failed for basis row {j} at k={k}"
                    )


def _curl_symbol(k, mode) -> np.ndarray:
    """Symmetrized curl symbol i k x_r M + (i k x_r M)^T."""
    k = np.asarray(k, dtype=float)
    rows = 1j * np.cross(k[None, :], np.asarray(mode, dtype=complex))
    return rows + rows.T


class LinearOperator:
    """HSTF table specialized to one parameter set (cached eigenvalues)."""

    def __init__(self, table: HstfTable, p: StabilizedParams):
        self.table = table
        self.params = p
        self.lam = table.eigenvalues(p)

    @property
    def grid(self) -> Grid:
        return self.table.grid

    def apply_multiplier(self, phis: np.ndarray, qhat_flat: np.ndarray) -> np.ndarray:
        """Apply a per-mode per-helicity multiplier table to (5, M) data."""
        return kernels.apply_phi_modes(self.table.U, phis, qhat_flat)
