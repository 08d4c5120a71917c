# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: fused per-mode basis contractions and pointwise loops.

Same function contract and array layout as the NumPy fallback in
``_kernels_py``; see that module for the layout notes.
"""

import numpy as np

from libc.math cimport sqrt, acos, cos, M_PI

ctypedef double complex dc

cdef double ISQ2 = 1.0 / sqrt(2.0)
cdef double SQ2 = sqrt(2.0)
cdef double SQ32 = sqrt(1.5)
cdef double ISQ6 = 1.0 / sqrt(6.0)
cdef double ISO_FLOOR = 1e-28


def dof_to_stf(q):
    # thin reuse of the NumPy version; not a hot path on its own
    from . import _kernels_py
    return _kernels_py.dof_to_stf(q)


def stf_to_dof(a):
    from . import _kernels_py
    return _kernels_py.stf_to_dof(a)


cdef inline void _load_stf(dc[:, ::1] q, Py_ssize_t m, dc* a) noexcept nogil:
    a[0] = (q[0, m] - q[1, m]) * ISQ2
    a[1] = (q[0, m] + q[1, m]) * SQ32
    a[2] = q[2, m] * SQ2
    a[3] = q[3, m] * SQ2
    a[4] = q[4, m] * SQ2


cdef inline void _store_dof(dc[:, ::1] q, Py_ssize_t m, dc* a) noexcept nogil:
    q[0, m] = a[0] * ISQ2 + a[1] * ISQ6
    q[1, m] = -a[0] * ISQ2 + a[1] * ISQ6
    q[2, m] = a[2] * ISQ2
    q[3, m] = a[3] * ISQ2
    q[4, m] = a[4] * ISQ2


def project_modes(U, qhat):
    U = np.ascontiguousarray(U)
    qhat = np.ascontiguousarray(qhat)
    cdef dc[:, :, ::1] u = U
    cdef dc[:, ::1] q = qhat
    out = np.empty_like(qhat)
    cdef dc[:, ::1] c = out
    cdef Py_ssize_t m, j, l, n = u.shape[0]
    cdef dc a[5]
    cdef dc acc
    with nogil:
        for m in range(n):
            _load_stf(q, m, a)
            for j in range(5):
                acc = 0
                for l in range(5):
                    acc = acc + u[m, j, l] * a[l]
                c[j, m] = acc
    return out


def reconstruct_modes(U, c):
    U = np.ascontiguousarray(U)
    c = np.ascontiguousarray(c)
    cdef dc[:, :, ::1] u = U
    cdef dc[:, ::1] cc = c
    out = np.empty_like(c)
    cdef dc[:, ::1] q = out
    cdef Py_ssize_t m, j, l, n = u.shape[0]
    cdef dc a[5]
    cdef dc acc
    with nogil:
        for m in range(n):
            for l in range(5):
                acc = 0
                for j in range(5):
                    acc = acc + u[m, j, l].conjugate() * cc[j, m]
                a[l] = acc
            _store_dof(q, m, a)
    return out


def apply_phi_modes(U, phis, qhat):
    U = np.ascontiguousarray(U)
    phis = np.ascontiguousarray(phis)
    qhat = np.ascontiguousarray(qhat)
    cdef dc[:, :, ::1] u = U
    cdef double[:, ::1] ph = phis
    cdef dc[:, ::1] q = qhat
    out = np.empty_like(qhat)
    cdef dc[:, ::1] o = out
    cdef Py_ssize_t m, j, l, n = u.shape[0]
    cdef dc a[5]
    cdef dc cj[5]
    cdef dc acc
    with nogil:
        for m in range(n):
            _load_stf(q, m, a)
            for j in range(5):
                acc = 0
                for l in range(5):
                    acc = acc + u[m, j, l] * a[l]
                cj[j] = acc * ph[m, j]
            for l in range(5):
                acc = 0
                for j in range(5):
                    acc = acc + u[m, j, l].conjugate() * cj[j]
                a[l] = acc
            _store_dof(o, m, a)
    return out


def etd1_combine(U, phi0, phi1, double tau, qhat_q, qhat_n, want_coeffs=False):
    U = np.ascontiguousarray(U)
    phi0 = np.ascontiguousarray(phi0)
    phi1 = np.ascontiguousarray(phi1)
    qhat_q = np.ascontiguousarray(qhat_q)
    qhat_n = np.ascontiguousarray(qhat_n)
    cdef dc[:, :, ::1] u = U
    cdef double[:, ::1] p0 = phi0
    cdef double[:, ::1] p1 = phi1
    cdef dc[:, ::1] qq = qhat_q
    cdef dc[:, ::1] qn = qhat_n
    out = np.empty_like(qhat_q)
    cdef dc[:, ::1] o = out
    cdef bint keep = bool(want_coeffs)
    c_pred_arr = np.empty_like(qhat_q) if keep else None
    c_n_arr = np.empty_like(qhat_q) if keep else None
    cdef dc[:, ::1] cp = c_pred_arr if keep else qq
    cdef dc[:, ::1] cn_out = c_n_arr if keep else qq
    cdef Py_ssize_t m, j, l, n = u.shape[0]
    cdef dc aq[5]
    cdef dc an[5]
    cdef dc cj[5]
    cdef dc accq, accn
    with nogil:
        for m in range(n):
            _load_stf(qq, m, aq)
            _load_stf(qn, m, an)
            for j in range(5):
                accq = 0
                accn = 0
                for l in range(5):
                    accq = accq + u[m, j, l] * aq[l]
                    accn = accn + u[m, j, l] * an[l]
                cj[j] = p0[m, j] * accq + tau * (p1[m, j] * accn)
                if keep:
                    cp[j, m] = cj[j]
                    cn_out[j, m] = accn
            for l in range(5):
                accq = 0
                for j in range(5):
                    accq = accq + u[m, j, l].conjugate() * cj[j]
                aq[l] = accq
            _store_dof(o, m, aq)
    if keep:
        return out, c_pred_arr, c_n_arr
    return out


def etdrk2_correct(U, phi2, double tau, c_pred, c_n, qhat_nt):
    U = np.ascontiguousarray(U)
    phi2 = np.ascontiguousarray(phi2)
    c_pred = np.ascontiguousarray(c_pred)
    c_n = np.ascontiguousarray(c_n)
    qhat_nt = np.ascontiguousarray(qhat_nt)
    cdef dc[:, :, ::1] u = U
    cdef double[:, ::1] p2 = phi2
    cdef dc[:, ::1] cp = c_pred
    cdef dc[:, ::1] cn = c_n
    cdef dc[:, ::1] qt = qhat_nt
    out = np.empty_like(c_pred)
    cdef dc[:, ::1] o = out
    cdef Py_ssize_t m, j, l, n = u.shape[0]
    cdef dc a[5]
    cdef dc cj[5]
    cdef dc acc
    with nogil:
        for m in range(n):
            _load_stf(qt, m, a)
            for j in range(5):
                acc = 0
                for l in range(5):
                    acc = acc + u[m, j, l] * a[l]
                cj[j] = cp[j, m] + tau * (p2[m, j] * (acc - cn[j, m]))
            for l in range(5):
                acc = 0
                for j in range(5):
                    acc = acc + u[m, j, l].conjugate() * cj[j]
                a[l] = acc
            _store_dof(o, m, a)
    return out


def bulk_force_field(q, double alpha, double beta, double gamma, double shift, out=None):
    if out is None:
        out = np.empty_like(q)
    cdef double[:, ::1] v = q
    cdef double[:, ::1] r = out
    cdef Py_ssize_t m, n = v.shape[1]
    cdef double q11, q22, q12, q13, q23, q33, tr2, s11, s22, s12, s13, s23, c, third
    with nogil:
        for m in range(n):
            q11 = v[0, m]; q22 = v[1, m]; q12 = v[2, m]; q13 = v[3, m]; q23 = v[4, m]
            q33 = -(q11 + q22)
            tr2 = q11 * q11 + q22 * q22 + q33 * q33 + 2.0 * (q12 * q12 + q13 * q13 + q23 * q23)
            s11 = q11 * q11 + q12 * q12 + q13 * q13
            s22 = q12 * q12 + q22 * q22 + q23 * q23
            s12 = q12 * (q11 + q22) + q13 * q23
            s13 = q11 * q13 + q12 * q23 + q13 * q33
            s23 = q12 * q13 + q22 * q23 + q23 * q33
            c = (shift - alpha) - gamma * tr2
            third = tr2 / 3.0
            r[0, m] = c * q11 + beta * (s11 - third)
            r[1, m] = c * q22 + beta * (s22 - third)
            r[2, m] = c * q12 + beta * s12
            r[3, m] = c * q13 + beta * s13
            r[4, m] = c * q23 + beta * s23
    return out


def trace_q2_field(q):
    cdef double[:, ::1] v = q
    cdef Py_ssize_t m, n = v.shape[1]
    out = np.empty(n)
    cdef double[::1] r = out
    cdef double q11, q22
    with nogil:
        for m in range(n):
            q11 = v[0, m]; q22 = v[1, m]
            r[m] = q11 * q11 + q22 * q22 + (q11 + q22) * (q11 + q22) + \
                2.0 * (v[2, m] * v[2, m] + v[3, m] * v[3, m] + v[4, m] * v[4, m])
    return out


def det_field(q):
    cdef double[:, ::1] v = q
    cdef Py_ssize_t m, n = v.shape[1]
    out = np.empty(n)
    cdef double[::1] r = out
    cdef double q11, q22, q12, q13, q23, q33
    with nogil:
        for m in range(n):
            q11 = v[0, m]; q22 = v[1, m]; q12 = v[2, m]; q13 = v[3, m]; q23 = v[4, m]
            q33 = -(q11 + q22)
            r[m] = q11 * (q22 * q33 - q23 * q23) - q12 * (q12 * q33 - q23 * q13) \
                + q13 * (q12 * q23 - q22 * q13)
    return out


def sym3_eigenvalues(q):
    cdef double[:, ::1] v = q
    cdef Py_ssize_t m, n = v.shape[1]
    out1 = np.empty(n)
    out2 = np.empty(n)
    out3 = np.empty(n)
    cdef double[::1] r1 = out1
    cdef double[::1] r2 = out2
    cdef double[::1] r3 = out3
    cdef double q11, q22, q12, q13, q23, q33, tr2, det, p, arg, ct, st, two_p
    cdef double half_sq3 = 0.5 * sqrt(3.0)
    with nogil:
        for m in range(n):
            q11 = v[0, m]; q22 = v[1, m]; q12 = v[2, m]; q13 = v[3, m]; q23 = v[4, m]
            q33 = -(q11 + q22)
            tr2 = q11 * q11 + q22 * q22 + q33 * q33 + 2.0 * (q12 * q12 + q13 * q13 + q23 * q23)
            if tr2 < ISO_FLOOR:
                r1[m] = 0.0; r2[m] = 0.0; r3[m] = 0.0
                continue
            det = q11 * (q22 * q33 - q23 * q23) - q12 * (q12 * q33 - q23 * q13) \
                + q13 * (q12 * q23 - q22 * q13)
            p = sqrt(tr2 / 6.0)
            arg = det / (2.0 * p * p * p)
            if arg > 1.0:
                arg = 1.0
            elif arg < -1.0:
                arg = -1.0
            # theta = acos(arg)/3 lies in [0, pi/3]: sin(theta) >= 0, so the
            # shifted cosines follow from one cos/sqrt pair
            ct = cos(acos(arg) / 3.0)
            st = sqrt(1.0 - ct * ct if ct * ct < 1.0 else 0.0)
            two_p = 2.0 * p
            r3[m] = two_p * ct
            r2[m] = two_p * (-0.5 * ct + half_sq3 * st)
            r1[m] = two_p * (-0.5 * ct - half_sq3 * st)
    return out1, out2, out3
