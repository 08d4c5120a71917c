"""Pointwise algebra of symmetric traceless 3x3 tensors.

A Q-tensor is stored through its 5 independent entries (q11, q22, q12,
q13, q23); the remaining entries follow from symmetry and q33 = -(q11+q22),
so both structural constraints hold by construction.  All functions here
are pure and operate on a single tensor; the vectorized grid versions live
in the kernel backends.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np


class QTensor5(NamedTuple):
    q11: float
    q22: float
    q12: float
    q13: float
    q23: float


ZERO = QTensor5(0.0, 0.0, 0.0, 0.0, 0.0)

# Degenerate'trQ^2' floor: below this the tensor is treated as isotropic
# (all eigenvalues coincide at 0 to better than 1e-14).
_ISO_FLOOR = 1e-28
# Floor for the biaxiality denominator; the formula is 0/0 at Q = 0 and the
# sensible limit for vanishing order is "no biaxiality".
_BIAX_FLOOR = 1e-24


def to_full(q: QTensor5) -> np.ndarray:
    """Expand the 5 stored entries to the full symmetric traceless matrix."""
    q11, q22, q12, q13, q23 = q
    return np.array(
        [
            [q11, q12, q13],
            [q12, q22, q23],
            [q13, q23, -(q11 + q22)],
        ]
    )


def from_full(m, tol: float) -> QTensor5:
    """Read back a full matrix, rejecting asymmetry or trace beyond ``tol``."""
    m = np.asarray(m, dtype=float)
    asym = np.max(np.abs(m - m.T))
    if asym > tol:
        raise ValueError(f"matrix is not symmetric: max |M - M^T| = {asym:g} > {tol:g}")
    trace = abs(m[0, 0] + m[1, 1] + m[2, 2])
    if trace > tol:
        raise ValueError(f"matrix is not traceless: |trace| = {trace:g} > {tol:g}")
    return QTensor5(m[0, 0], m[1, 1], m[0, 1], m[0, 2], m[1, 2])


def frob_dot(a: QTensor5, b: QTensor5) -> float:
    """Frobenius inner product over the full 3x3 matrices."""
    return (
        2.0 * (a.q11 * b.q11 + a.q22 * b.q22)
        + a.q11 * b.q22
        + a.q22 * b.q11
        + 2.0 * (a.q12 * b.q12 + a.q13 * b.q13 + a.q23 * b.q23)
    )


def frob_norm(q: QTensor5) -> float:
    return math.sqrt(frob_dot(q, q))


def trace_q2(q: QTensor5) -> float:
    return frob_dot(q, q)


def det3(q: QTensor5) -> float:
    """Determinant of the full matrix (for traceless Q, trace(Q^3) = 3 det)."""
    q11, q22, q12, q13, q23 = q
    q33 = -(q11 + q22)
    return (
        q11 * (q22 * q33 - q23 * q23)
        - q12 * (q12 * q33 - q23 * q13)
        + q13 * (q12 * q23 - q22 * q13)
    )


def bulk_force(q: QTensor5, alpha: float, beta: float, gamma: float) -> QTensor5:
    """Bulk force -alpha*Q + beta*(Q^2 - tr(Q^2)/3 I) - gamma*tr(Q^2)*Q.

    The -tr(Q^2)/3 term removes the trace that Q^2 picks up, so the result
    is again symmetric traceless by construction.
    """
    q11, q22, q12, q13, q23 = q
    q33 = -(q11 + q22)
    m = trace_q2(q)
    # independent entries of Q^2 (symmetric product)
    s11 = q11 * q11 + q12 * q12 + q13 * q13
    s22 = q12 * q12 + q22 * q22 + q23 * q23
    s12 = q11 * q12 + q12 * q22 + q13 * q23
    s13 = q11 * q13 + q12 * q23 + q13 * q33
    s23 = q12 * q13 + q22 * q23 + q23 * q33
    c = -alpha - gamma * m
    third_m = m / 3.0
    return QTensor5(
        c * q11 + beta * (s11 - third_m),
        c * q22 + beta * (s22 - third_m),
        c * q12 + beta * s12,
        c * q13 + beta * s13,
        c * q23 + beta * s23,
    )


def eigenvalues_sym3(q: QTensor5) -> tuple[float, float, float]:
    """Eigenvalues of the full matrix, ascending.

    Closed-form trigonometric solution of the characteristic cubic of the
    (already deviatoric) tensor; branch- and allocation-free so the grid
    kernels can inline the same arithmetic.
    """
    m = trace_q2(q)
    if m < _ISO_FLOOR:
        return (0.0, 0.0, 0.0)
    d = det3(q)
    p = math.sqrt(m / 6.0)
    arg = d / (2.0 * p * p * p)
    arg = min(1.0, max(-1.0, arg))
    theta = math.acos(arg) / 3.0
    two_p = 2.0 * p
    l3 = two_p * math.cos(theta)
    l2 = two_p * math.cos(theta - 2.0 * math.pi / 3.0)
    l1 = two_p * math.cos(theta + 2.0 * math.pi / 3.0)
    return (l1, l2, l3)


def scalar_order(q: QTensor5) -> float:
    """Scalar order parameter: 1.5 times the largest eigenvalue."""
    return 1.5 * eigenvalues_sym3(q)[2]


def biaxiality(q: QTensor5) -> float:
    """Biaxiality measure in [0, 1]; 0 for uniaxial tensors and at Q = 0."""
    m = trace_q2(q)
    if m < _BIAX_FLOOR:
        return 0.0
    tr_q3 = 3.0 * det3(q)
    val = 1.0 - 6.0 * tr_q3 * tr_q3 / (m * m * m)
    return math.sqrt(min(1.0, max(0.0, val)))
