"""Brute-force reference implementations on tiny problems.

Everything here trades speed for transparency: dense 5x5 symbol matrices in
a fixed trace-free coordinate basis, matrix phi-functions by two independent
routes, and full exponential steps assembled mode by mode with explicit DFT
matrices.  Used to validate the helical-basis fast path and to generate
ground truth; single-threaded by design.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .grid import Grid, TensorField
from .hstf import STF_BASIS, _curl_symbol
from .params import StabilizedParams

_DENSE_LIMIT = 1000
_GRID_LIMIT = 4


def stf_coords(mode) -> np.ndarray:
    """Coordinates of a symmetric traceless 3x3 matrix in STF_BASIS."""
    return np.einsum("st,lst->l", np.asarray(mode, dtype=complex), STF_BASIS)


def stf_matrix(coords) -> np.ndarray:
    return np.einsum("l,lst->st", np.asarray(coords, dtype=complex), STF_BASIS)


def symbol_matrix(k, p: StabilizedParams, curl_k=None) -> np.ndarray:
    """Dense 5x5 matrix of the linear-operator symbol in STF coordinates.

    ``curl_k`` feeds the first-derivative part separately so grid steppers
    can zero it on Nyquist-carrying modes; by default it equals ``k``.
    """
    k = np.asarray(k, dtype=float)
    if curl_k is None:
        curl_k = k
    curl_k = np.asarray(curl_k, dtype=float)
    m = p.model
    k2 = float(k @ k)
    out = np.empty((5, 5), dtype=complex)
    for l in range(5):
        img = (
            -m.L1 * k2 * STF_BASIS[l]
            - 0.5 * m.L4 * _curl_symbol(curl_k, STF_BASIS[l])
            - p.kappa_total * STF_BASIS[l]
        )
        out[:, l] = stf_coords(img)
    return out


def dense_phi(gamma: int, mat, method: str = "expm") -> np.ndarray:
    """Matrix phi-function by scaling-and-squaring or eigendecomposition.

    ``expm`` uses the augmented-matrix identity: the top-right n x n block of
    exp([[M, I, 0], [0, 0, I], [0, 0, 0]]) holds phi_gamma(M) in column
    block gamma.  ``eig`` diagonalizes (valid for the normal symbol
    matrices) and applies the scalar functions on the spectrum.
    """
    mat = np.asarray(mat, dtype=complex)
    n = mat.shape[0]
    if mat.shape != (n, n):
        raise ValueError("dense_phi needs a square matrix")
    if n > _DENSE_LIMIT:
        raise ValueError(f"dense_phi guard: n = {n} > {_DENSE_LIMIT}")
    if gamma not in (0, 1, 2):
        raise ValueError("phi order must be 0, 1 or 2")

    if method == "expm":
        if gamma == 0:
            return scipy.linalg.expm(mat)
        blocks = gamma + 1
        aug = np.zeros((n * blocks, n * blocks), dtype=complex)
        aug[:n, :n] = mat
        for b in range(blocks - 1):
            aug[b * n : (b + 1) * n, (b + 1) * n : (b + 2) * n] = np.eye(n)
        full = scipy.linalg.expm(aug)
        return full[:n, gamma * n : (gamma + 1) * n]
    if method == "eig":
        w, v = np.linalg.eig(mat)
        if gamma == 0:
            fw = np.exp(w)
        else:
            # normal symbols have real spectrum; keep a complex-safe path
            fw = np.array([_phi_complex(gamma, z) for z in w])
        return v @ np.diag(fw) @ np.linalg.inv(v)
    raise ValueError(f"unknown dense_phi method {method!r}")


def _phi_complex(gamma: int, z: complex) -> complex:
    from .operators import phi as scalar_phi

    if abs(z.imag) < 1e-12:
        return complex(scalar_phi(gamma, z.real))
    if gamma == 1:
        return (np.exp(z) - 1.0) / z
    return (np.exp(z) - 1.0 - z) / (z * z)


def _dft_matrices(grid: Grid):
    """Per-axis unnormalized forward DFT matrices W[k, i] = exp(-i k x_i)."""
    mats = []
    for d in range(3):
        x = grid.axis_coords(d)
        k = grid.axis_wavenumbers(d)
        mats.append(np.exp(-1j * np.outer(k, x)))
    return mats


def _dft3(field, mats, inverse=False):
    wx, wy, wz = mats
    if inverse:
        n = wx.shape[0] * wy.shape[0] * wz.shape[0]
        wx, wy, wz = np.conj(wx).T, np.conj(wy).T, np.conj(wz).T
        out = np.einsum("xi,yj,zk,ijk->xyz", wx, wy, wz, field) / n
    else:
        out = np.einsum("xi,yj,zk,ijk->xyz", wx, wy, wz, field)
    return out


def _nonlinear_full(q5: np.ndarray, p: StabilizedParams) -> np.ndarray:
    """Stabilized nonlinearity evaluated with explicit 3x3 matrix algebra."""
    m = p.model
    out = np.empty_like(q5)
    flat = q5.reshape(5, -1)
    res = out.reshape(5, -1)
    eye = np.eye(3)
    for i in range(flat.shape[1]):
        q11, q22, q12, q13, q23 = flat[:, i]
        full = np.array(
            [[q11, q12, q13], [q12, q22, q23], [q13, q23, -(q11 + q22)]]
        )
        sq = full @ full
        tr2 = np.trace(sq)
        f = (
            -m.alpha * full
            + m.beta * (sq - tr2 / 3.0 * eye)
            - m.gamma * tr2 * full
            + p.kappa_total * full
        )
        res[:, i] = (f[0, 0], f[1, 1], f[0, 1], f[0, 2], f[1, 2])
    return out


def oracle_etd_step(
    scheme: int, state: TensorField, tau: float, p: StabilizedParams
) -> TensorField:
    """One dense reference step of the fully discrete scheme.

    Works per mode (the linear operator is exactly block-diagonal over
    modes, so nothing is lost against the giant assembled matrix) on grids
    up to 4^3.
    """
    g = state.grid
    if max(g.shape) > _GRID_LIMIT:
        raise ValueError(f"oracle restricted to grids up to {_GRID_LIMIT}^3")
    if scheme not in (1, 2):
        raise ValueError("scheme must be 1 (ETD1) or 2 (ETDRK2)")

    mats = _dft_matrices(g)
    nyq = g.nyquist_mask()
    kx = g.axis_wavenumbers(0)
    ky = g.axis_wavenumbers(1)
    kz = g.axis_wavenumbers(2)

    def phis_for_mode(idx):
        k = np.array([kx[idx[0]], ky[idx[1]], kz[idx[2]]])
        curl_k = np.zeros(3) if nyq[idx] else k
        sym = symbol_matrix(k, p, curl_k=curl_k)
        return [dense_phi(gam, tau * sym, method="eig") for gam in range(3)]

    def transform(field5):
        return np.stack([_dft3(field5[c], mats) for c in range(5)])

    def back(spec5):
        out = np.stack([_dft3(spec5[c], mats, inverse=True) for c in range(5)])
        return np.ascontiguousarray(out.real)

    def coords_of(spec5, idx):
        q11, q22, q12, q13, q23 = spec5[(slice(None),) + idx]
        mode = np.array(
            [[q11, q12, q13], [q12, q22, q23], [q13, q23, -(q11 + q22)]],
            dtype=complex,
        )
        return stf_coords(mode)

    def set_from_coords(spec5, idx, coords):
        mode = stf_matrix(coords)
        spec5[(0,) + idx] = mode[0, 0]
        spec5[(1,) + idx] = mode[1, 1]
        spec5[(2,) + idx] = mode[0, 1]
        spec5[(3,) + idx] = mode[0, 2]
        spec5[(4,) + idx] = mode[1, 2]

    qhat = transform(state.data)
    nhat = transform(_nonlinear_full(state.data, p))
    indices = list(np.ndindex(g.shape))
    tables = {idx: phis_for_mode(idx) for idx in indices}

    pred = np.zeros_like(qhat)
    for idx in indices:
        p0, p1, _ = tables[idx]
        c = p0 @ coords_of(qhat, idx) + tau * (p1 @ coords_of(nhat, idx))
        set_from_coords(pred, idx, c)
    q_pred = TensorField(g, back(pred))
    if scheme == 1:
        return q_pred

    nt_hat = transform(_nonlinear_full(q_pred.data, p))
    out = np.zeros_like(qhat)
    for idx in indices:
        _, _, p2 = tables[idx]
        c = coords_of(pred, idx) + tau * (
            p2 @ (coords_of(nt_hat, idx) - coords_of(nhat, idx))
        )
        set_from_coords(out, idx, c)
    return TensorField(g, back(out))
