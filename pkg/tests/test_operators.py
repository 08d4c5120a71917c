"""phi-functions and operator exponentials against high-precision oracles."""

import mpmath
import numpy as np
import pytest
import scipy.linalg

from bluephase import grid as sg
from bluephase import operators as ops
from bluephase.grid import Grid, SpectralField, TensorField
from bluephase.hstf import HstfTable, LinearOperator
from bluephase.oracle import symbol_matrix
from conftest import random_field


def phi_series_oracle(gamma: int, z: float) -> float:
    """200-term arbitrary-precision Taylor series of phi_gamma."""
    with mpmath.workdps(60):
        zz = mpmath.mpf(z)
        acc = mpmath.mpf(0)
        for k in range(200):
            acc += zz**k / mpmath.factorial(k + gamma)
        return float(acc)


def test_phi_limits_at_zero():
    assert ops.phi(0, 0.0) == 1.0
    assert ops.phi(1, 0.0) == 1.0
    assert ops.phi(2, 0.0) == 0.5


def test_phi_closed_form_value():
    assert ops.phi(1, -1.0) == pytest.approx(1.0 - np.exp(-1.0), rel=1e-15)
    assert ops.phi(0, -2.0) == pytest.approx(np.exp(-2.0), rel=1e-15)


def test_phi_tiny_arguments_match_series():
    for z in np.linspace(-1e-6, 1e-6, 41):
        for gamma in (1, 2):
            assert ops.phi(gamma, z) == pytest.approx(
                phi_series_oracle(gamma, z), rel=1e-14
            )


def test_phi_across_taylor_seam():
    zs = np.concatenate([np.linspace(0.01, 0.1, 181), -np.linspace(0.01, 0.1, 181)])
    for z in zs:
        for gamma in (1, 2):
            assert ops.phi(gamma, float(z)) == pytest.approx(
                phi_series_oracle(gamma, float(z)), rel=1e-14
            )


def test_phi_recurrences_large_negative_range():
    """z phi1 = phi0 - 1 and z^2 phi2 = phi0 - 1 - z over z in [-1e6, 0].

    The right-hand sides are evaluated in 60-digit arithmetic; forming
    exp(z) - 1 - z in doubles would itself cancel near zero.
    """
    zs = -np.logspace(-8, 6, 120)
    with mpmath.workdps(60):
        for z in zs:
            rhs1 = mpmath.expm1(mpmath.mpf(z))
            rhs2 = rhs1 - mpmath.mpf(z)
            lhs1 = mpmath.mpf(z) * mpmath.mpf(ops.phi(1, float(z)))
            lhs2 = mpmath.mpf(z) ** 2 * mpmath.mpf(ops.phi(2, float(z)))
            assert abs(lhs1 - rhs1) <= 1e-13 * abs(rhs1)
            assert abs(lhs2 - rhs2) <= 1e-13 * abs(rhs2)


def test_phi_positivity_on_negative_axis():
    z = -np.logspace(-10, 6, 100)
    p0 = ops.phi(0, z)
    # phi0 in (0, 1]; underflow to exactly 0 accepted for very negative z
    assert np.all(p0 >= 0) and np.all(p0 <= 1.0)
    assert np.all(p0[z > -700] > 0)
    assert np.all(ops.phi(1, z) > 0)
    assert np.all(ops.phi(2, z) > 0)


@pytest.fixture
def small_setup(sec61_stab):
    g = Grid(2, 2, 2)
    op = LinearOperator(HstfTable(g), sec61_stab)
    phis = ops.PhiTable.build(op, 0.03125)
    return g, op, phis


def test_apply_phi_zero_field(small_setup):
    g, _, phis = small_setup
    out = ops.apply_phi(0, 0.03125, SpectralField.zeros(g), phis)
    assert np.array_equal(out.data, np.zeros((5,) + g.shape))


def test_apply_phi_eigenmode(sec61_stab):
    """A field equal to T0 at one mode scales by exp(tau lambda_0)."""
    from bluephase import hstf

    g = Grid(4, 4, 4)
    op = LinearOperator(HstfTable(g), sec61_stab)
    tau = 0.25
    phis = ops.PhiTable.build(op, tau)
    idx = (1, 0, 0)
    k = np.array([g.axis_wavenumbers(0)[1], 0.0, 0.0])
    t0 = hstf.hstf_tensors(hstf.local_frame(k))[0]
    s = SpectralField.zeros(g)
    s.data[0][idx] = t0[0, 0]
    s.data[1][idx] = t0[1, 1]
    s.data[2][idx] = t0[0, 1]
    s.data[3][idx] = t0[0, 2]
    s.data[4][idx] = t0[1, 2]
    lam0 = hstf.operator_eigenvalues(k, sec61_stab)[0]
    out = ops.apply_phi(0, tau, s, phis)
    np.testing.assert_allclose(out.data, np.exp(tau * lam0) * s.data, atol=1e-13)


def _assemble_dense_operator(g: Grid, stab) -> np.ndarray:
    """Dense real matrix of the linear operator on the 40 grid DOF.

    Built by pushing every unit field through the spectral symbol route:
    independent of the helical basis (uses the dense 5x5 symbol directly).
    """
    n = 5 * g.npoints
    mat = np.zeros((n, n))
    nyq = g.nyquist_mask()
    kxs = g.axis_wavenumbers(0)
    kys = g.axis_wavenumbers(1)
    kzs = g.axis_wavenumbers(2)
    from bluephase.oracle import stf_coords, stf_matrix

    for col in range(n):
        vec = np.zeros(n)
        vec[col] = 1.0
        f = TensorField(g, vec.reshape((5,) + g.shape))
        shat = sg.forward(f).data
        out = np.zeros_like(shat)
        for idx in np.ndindex(g.shape):
            k = np.array([kxs[idx[0]], kys[idx[1]], kzs[idx[2]]])
            curl_k = np.zeros(3) if nyq[idx] else k
            sym = symbol_matrix(k, stab, curl_k=curl_k)
            q11, q22, q12, q13, q23 = shat[(slice(None),) + idx]
            mode = np.array(
                [[q11, q12, q13], [q12, q22, q23], [q13, q23, -(q11 + q22)]],
                dtype=complex,
            )
            img = stf_matrix(sym @ stf_coords(mode))
            out[(0,) + idx] = img[0, 0]
            out[(1,) + idx] = img[1, 1]
            out[(2,) + idx] = img[0, 1]
            out[(3,) + idx] = img[0, 2]
            out[(4,) + idx] = img[1, 2]
        col_field = sg.inverse(SpectralField(g, out))
        mat[:, col] = col_field.data.reshape(-1)
    return mat


def test_apply_phi_matches_dense_matrix_exponential(rng, sec61_stab, small_setup):
    g, op, phis = small_setup
    tau = 0.03125
    dense = _assemble_dense_operator(g, sec61_stab)
    f = random_field(g, rng)
    expect = (scipy.linalg.expm(tau * dense) @ f.data.reshape(-1)).reshape(f.data.shape)
    shat = sg.forward(f)
    got = sg.inverse(ops.apply_phi(0, tau, shat, phis))
    np.testing.assert_allclose(got.data, expect, atol=1e-11)


def test_apply_phi_linear_and_commuting(rng, small_setup):
    g, _, phis = small_setup
    tau = 0.03125
    a = sg.forward(random_field(g, rng))
    b = sg.forward(random_field(g, rng))
    lin_lhs = ops.apply_phi(1, tau, SpectralField(g, 2.0 * a.data + b.data), phis)
    lin_rhs = 2.0 * ops.apply_phi(1, tau, a, phis).data + ops.apply_phi(1, tau, b, phis).data
    np.testing.assert_allclose(lin_lhs.data, lin_rhs, atol=1e-12)
    ab = ops.apply_phi(0, tau, ops.apply_phi(1, tau, a, phis), phis)
    ba = ops.apply_phi(1, tau, ops.apply_phi(0, tau, a, phis), phis)
    np.testing.assert_allclose(ab.data, ba.data, atol=1e-12 * np.max(np.abs(a.data)))


def test_apply_phi_contracts(rng, sec61_stab):
    """||exp(tau L) s|| <= ||s|| in the Parseval norm (with the e^-kappa1tau margin)."""
    g = Grid(8, 8, 8)
    phis = ops.PhiTable.build(LinearOperator(HstfTable(g), sec61_stab), 0.125)
    f = random_field(g, rng)
    shat = sg.forward(f)
    out = ops.apply_phi(0, 0.125, shat, phis)
    before = float(np.sum(sg.spectral_norm2_modes(shat)))
    after = float(np.sum(sg.spectral_norm2_modes(out)))
    assert after <= before * np.exp(-2 * sec61_stab.kappa1 * 0.125) * (1 + 1e-12)


def test_apply_phi_preserves_reality(rng, sec61_stab):
    g = Grid(8, 8, 8)
    tau = 0.0625
    phis = ops.PhiTable.build(LinearOperator(HstfTable(g), sec61_stab), tau)
    f = random_field(g, rng)
    for gamma in (0, 1, 2):
        out = ops.apply_phi(gamma, tau, sg.forward(f), phis)
        back = sg.inverse(out)  # raises if the imaginary residual exceeds 1e-8
        assert np.all(np.isfinite(back.data))


def test_phitable_tau_mismatch(small_setup):
    g, _, phis = small_setup
    with pytest.raises(ValueError, match="tau"):
        ops.apply_phi(0, 0.5, SpectralField.zeros(g), phis)


def test_nonlinear_matches_pointwise(rng, sec61_stab):
    from bluephase import qtensor as qt

    g = Grid(4, 4, 4)
    f = random_field(g, rng)
    out = ops.nonlinear(f, sec61_stab)
    m = sec61_stab.model
    for _ in range(20):
        idx = tuple(rng.integers(0, 4, 3))
        q = qt.QTensor5(*(f.data[(slice(None),) + idx]))
        expect = qt.bulk_force(q, m.alpha, m.beta, m.gamma)
        expect = qt.QTensor5(*(e + sec61_stab.kappa_total * c for e, c in zip(expect, q)))
        got = out.data[(slice(None),) + idx]
        np.testing.assert_allclose(got, expect, rtol=1e-13, atol=1e-14)


def test_nonlinear_zero(sec61_stab):
    g = Grid(4, 4, 4)
    out = ops.nonlinear(TensorField.zeros(g), sec61_stab)
    assert np.array_equal(out.data, np.zeros((5,) + g.shape))


def test_nonlinear_bounded_on_invariant_ball(rng, sec61_model):
    """||N(Q)||_F <= kappa1 * radius pointwise when ||Q||_F <= radius."""
    from bluephase.params import select_stabilization

    stab, _ = select_stabilization(sec61_model, sup_norm_q0=1.0)
    g = Grid(4, 4, 4)
    a = stab.mbp_radius
    raw = rng.normal(size=(5,) + g.shape)
    f = TensorField(g, raw)
    norms = np.sqrt(sg.frob_norm2_field(f))
    scale = rng.uniform(0.0, 1.0, size=g.shape) * a / np.maximum(norms, 1e-12)
    f = TensorField(g, raw * scale)
    assert sg.sup_norm(f) <= a * (1 + 1e-12)
    out = ops.nonlinear(f, stab)
    out_norms = np.sqrt(sg.frob_norm2_field(out))
    assert float(np.max(out_norms)) <= stab.kappa1 * a * (1 + 1e-12)
