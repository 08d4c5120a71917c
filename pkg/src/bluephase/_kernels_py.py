"""NumPy implementations of the hot kernels.

Selected at import time by :mod:`bluephase.kernels` when the compiled
extension is unavailable (or disabled).  Both backends implement exactly
the same functions on the same array layouts:

* grid fields: ``(5, M)`` float64/complex128, components in storage order
  (q11, q22, q12, q13, q23), ``M`` flattened grid points/modes;
* per-mode basis matrices ``U``: ``(M, 5, 5)`` complex128, row ``j`` maps
  orthonormal trace-free coordinates to helical-basis coefficient ``j``;
* per-mode scalar tables (eigenvalues, phi values): ``(M, 5)`` float64.
"""

from __future__ import annotations

import numpy as np

_ISQ2 = 1.0 / np.sqrt(2.0)
_SQ2 = np.sqrt(2.0)
_SQ32 = np.sqrt(1.5)
_ISQ6 = 1.0 / np.sqrt(6.0)

_ISO_FLOOR = 1e-28


def dof_to_stf(q):
    """Map 5-DOF storage to orthonormal symmetric-trace-free coordinates."""
    a = np.empty_like(q)
    a[0] = (q[0] - q[1]) * _ISQ2
    a[1] = (q[0] + q[1]) * _SQ32
    a[2] = q[2] * _SQ2
    a[3] = q[3] * _SQ2
    a[4] = q[4] * _SQ2
    return a


def stf_to_dof(a):
    q = np.empty_like(a)
    q[0] = a[0] * _ISQ2 + a[1] * _ISQ6
    q[1] = -a[0] * _ISQ2 + a[1] * _ISQ6
    q[2] = a[2] * _ISQ2
    q[3] = a[3] * _ISQ2
    q[4] = a[4] * _ISQ2
    return q


def project_modes(U, qhat):
    """Helical-basis coefficients c (5, M) of spectral DOF arrays (5, M)."""
    a = dof_to_stf(qhat)
    return np.ascontiguousarray(np.einsum("mjl,lm->jm", U, a))


def reconstruct_modes(U, c):
    """Inverse of :func:`project_modes`."""
    a = np.einsum("mjl,jm->lm", np.conj(U), c)
    return np.ascontiguousarray(stf_to_dof(a))


def apply_phi_modes(U, phis, qhat):
    """Per-mode multiplier ``diag(phis)`` applied in the helical basis."""
    c = project_modes(U, qhat)
    c *= phis.T
    return reconstruct_modes(U, c)


def etd1_combine(U, phi0, phi1, tau, qhat_q, qhat_n, want_coeffs=False):
    """One exponential Euler update in coefficient space.

    Returns the spectral DOF arrays of ``phi0(tau L) Q + tau phi1(tau L) N``;
    with ``want_coeffs`` also the combined coefficients and those of N (the
    two arrays the second-order corrector needs).
    """
    c_q = project_modes(U, qhat_q)
    c_n = project_modes(U, qhat_n)
    c = phi0.T * c_q + tau * (phi1.T * c_n)
    out = reconstruct_modes(U, c)
    if want_coeffs:
        return out, c, c_n
    return out


def etdrk2_correct(U, phi2, tau, c_pred, c_n, qhat_nt):
    """Second-order corrector: add ``tau phi2(tau L)(N(Qt) - N(Q))``."""
    c_nt = project_modes(U, qhat_nt)
    c = c_pred + tau * (phi2.T * (c_nt - c_n))
    return reconstruct_modes(U, c)


def bulk_force_field(q, alpha, beta, gamma, shift, out=None):
    """Pointwise bulk force plus ``shift * Q`` over a 5-DOF field (5, M)."""
    if out is None:
        out = np.empty_like(q)
    q11, q22, q12, q13, q23 = q
    q33 = -(q11 + q22)
    m = trace_q2_field(q)
    s11 = q11 * q11 + q12 * q12 + q13 * q13
    s22 = q12 * q12 + q22 * q22 + q23 * q23
    s12 = q12 * (q11 + q22) + q13 * q23
    s13 = q11 * q13 + q12 * q23 + q13 * q33
    s23 = q12 * q13 + q22 * q23 + q23 * q33
    c = (shift - alpha) - gamma * m
    third_m = m / 3.0
    out[0] = c * q11 + beta * (s11 - third_m)
    out[1] = c * q22 + beta * (s22 - third_m)
    out[2] = c * q12 + beta * s12
    out[3] = c * q13 + beta * s13
    out[4] = c * q23 + beta * s23
    return out


def trace_q2_field(q):
    """Pointwise Frobenius norm squared tr(Q^2) of a 5-DOF field."""
    q11, q22, q12, q13, q23 = q[0], q[1], q[2], q[3], q[4]
    return (
        q11 * q11
        + q22 * q22
        + (q11 + q22) ** 2
        + 2.0 * (q12 * q12 + q13 * q13 + q23 * q23)
    )


def det_field(q):
    """Pointwise determinant; tr(Q^3) = 3 det for traceless Q."""
    q11, q22, q12, q13, q23 = q[0], q[1], q[2], q[3], q[4]
    q33 = -(q11 + q22)
    return (
        q11 * (q22 * q33 - q23 * q23)
        - q12 * (q12 * q33 - q23 * q13)
        + q13 * (q12 * q23 - q22 * q13)
    )


def sym3_eigenvalues(q):
    """Pointwise eigenvalue triples (ascending) of a 5-DOF field.

    Same trigonometric solution as :func:`bluephase.qtensor.eigenvalues_sym3`,
    vectorized; nearly-isotropic points return exact zeros.
    """
    m = trace_q2_field(q)
    d = det_field(q)
    iso = m < _ISO_FLOOR
    msafe = np.where(iso, 1.0, m)
    p = np.sqrt(msafe / 6.0)
    # plain multiplies keep the value bit-reproducible across backends
    arg = np.clip(d / (2.0 * p * p * p), -1.0, 1.0)
    theta = np.arccos(arg) / 3.0
    two_p = 2.0 * p
    l3 = two_p * np.cos(theta)
    l2 = two_p * np.cos(theta - 2.0 * np.pi / 3.0)
    l1 = two_p * np.cos(theta + 2.0 * np.pi / 3.0)
    zero = np.zeros_like(m)
    return (
        np.where(iso, zero, l1),
        np.where(iso, zero, l2),
        np.where(iso, zero, l3),
    )
