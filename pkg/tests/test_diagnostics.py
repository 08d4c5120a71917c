"""Energy, eigenvalue range, scalar fields and structure factor."""

import numpy as np
import pytest

from bluephase import diagnostics as dg
from bluephase import grid as sg
from bluephase import qtensor as qt
from bluephase.grid import Grid, TensorField
from bluephase.params import ModelParams
from conftest import random_field


def test_energy_zero_field(sec61_model):
    g = Grid(8, 8, 8)
    assert dg.discrete_energy(TensorField.zeros(g), sec61_model) == 0.0


def test_energy_constant_field(sec61_model):
    """Gradient and curl vanish: E = |Omega| * pointwise bulk density."""
    g = Grid(8, 8, 8)
    t = qt.QTensor5(0.4, -0.1, 0.2, 0.0, -0.3)
    f = TensorField(g, np.broadcast_to(np.array(t)[:, None, None, None], (5,) + g.shape).copy())
    m = qt.frob_dot(t, t)
    tr3 = 3.0 * qt.det3(t)
    p = sec61_model
    dens = 0.5 * p.alpha * m - p.beta / 3.0 * tr3 + 0.25 * p.gamma * m * m
    expect = (2 * np.pi) ** 3 * dens
    assert dg.discrete_energy(f, p) == pytest.approx(expect, rel=1e-12)


def _quadrature_energy_single_mode(p: ModelParams, amplitude=1.0, nq=4096) -> float:
    """Fine 1-D quadrature of the continuous energy for Q = T cos(z).

    T = diag(1,-1,0): the density depends only on z, gradients are
    -T sin(z) along z, and the curl rows are (T_r2, -T_r1, 0) sin(z).
    """
    z = (np.arange(nq) + 0.5) * (2 * np.pi / nq)
    t = np.diag([amplitude, -amplitude, 0.0])
    cos, sin = np.cos(z), np.sin(z)
    norm_t2 = np.sum(t * t)
    grad2 = norm_t2 * sin**2
    curl = np.zeros_like(z)
    for r in range(3):
        curl += t[r, 0] * cos * (t[r, 1] * sin) + t[r, 1] * cos * (-t[r, 0] * sin)
    q2 = norm_t2 * cos**2
    tsq = t @ t
    q3 = np.trace(tsq @ t) * cos**3
    dens = (
        0.5 * p.L1 * grad2
        + 0.5 * p.L4 * curl
        + 0.5 * p.alpha * q2
        - p.beta / 3.0 * q3
        + 0.25 * p.gamma * q2 * q2
    )
    return (2 * np.pi) ** 2 * float(np.sum(dens)) * (2 * np.pi / nq)


def test_energy_single_mode_matches_quadrature(sec61_model):
    g = Grid(8, 8, 8)
    _, _, z = g.meshgrid()
    data = np.zeros((5,) + g.shape)
    data[0] = np.cos(z)
    data[1] = -np.cos(z)
    f = TensorField(g, data)
    expect = _quadrature_energy_single_mode(sec61_model)
    assert dg.discrete_energy(f, sec61_model) == pytest.approx(expect, rel=1e-8)
    # the spec's closed-form gradient share for this mode
    grad_term = 0.5 * sec61_model.L1 * 2.0 * (2 * np.pi) ** 3 / 2.0
    shat = sg.forward(f)
    achiral = ModelParams(L1=sec61_model.L1, L4=0.0, alpha=sec61_model.alpha,
                          beta=sec61_model.beta, gamma=sec61_model.gamma)
    assert dg.elastic_energy_spectral(shat, achiral) == pytest.approx(grad_term, rel=1e-12)


def test_curl_term_both_routes_agree(rng, sec61_model):
    g = Grid(8, 8, 8)
    f = random_field(g, rng)
    spectral = dg.elastic_energy_spectral(sg.forward(f), sec61_model)
    grad_only = dg.elastic_energy_spectral(
        sg.forward(f),
        ModelParams(L1=sec61_model.L1, L4=0.0, alpha=1.0, beta=1.0, gamma=1.0),
    )
    curl_spectral = spectral - grad_only
    curl_physical = dg.curl_term_physical(f, sec61_model)
    assert curl_physical == pytest.approx(curl_spectral, rel=1e-10, abs=1e-12)


def test_eigen_range_cases():
    g = Grid(4, 4, 4)
    assert dg.eigen_range(TensorField.zeros(g)) == (0.0, 0.0)
    data = np.zeros((5,) + g.shape)
    data[0] = 2.0 / 3.0
    data[1] = -1.0 / 3.0
    f = TensorField(g, data)
    lmin, lmax = dg.eigen_range(f)
    # the repeated eigenvalue costs sqrt(eps) through the trigonometric form
    assert lmin == pytest.approx(-1.0 / 3.0, abs=2e-8)
    assert lmax == pytest.approx(2.0 / 3.0, abs=1e-12)


def test_scalar_fields_match_pointwise(rng):
    g = Grid(4, 4, 4)
    f = random_field(g, rng)
    s = dg.order_parameter_field(f)
    bb = dg.biaxiality_field(f)
    assert s.shape == g.shape and bb.shape == g.shape
    for _ in range(25):
        idx = tuple(rng.integers(0, 4, 3))
        q = qt.QTensor5(*f.data[(slice(None),) + idx])
        assert s[idx] == pytest.approx(qt.scalar_order(q), rel=1e-10, abs=1e-12)
        assert bb[idx] == pytest.approx(qt.biaxiality(q), rel=1e-8, abs=1e-8)
    assert np.all(bb >= 0) and np.all(bb <= 1)


def test_scalar_fields_trivial():
    g = Grid(4, 4, 4)
    zero = TensorField.zeros(g)
    assert np.array_equal(dg.order_parameter_field(zero), np.zeros(g.shape))
    assert np.array_equal(dg.biaxiality_field(zero), np.zeros(g.shape))
    data = np.zeros((5,) + g.shape)
    data[0] = data[1] = -1.0 / 3.0  # uniaxial of strength s0 = 1 along z
    f = TensorField(g, data)
    np.testing.assert_allclose(dg.order_parameter_field(f), 1.0, atol=1e-12)


def test_structure_factor_zero_and_single_mode():
    g = Grid(8, 8, 8)
    assert np.array_equal(dg.structure_factor(TensorField.zeros(g)), np.zeros(g.shape))
    x, y, _ = g.meshgrid()
    data = np.zeros((5,) + g.shape)
    data[0] = np.cos(x + 2 * y)
    data[1] = -np.cos(x + 2 * y)
    sf = dg.structure_factor(TensorField(g, data))
    expect_amp = (g.npoints / 2.0) ** 2 * 2.0  # ||T||_F^2 = 2 at each of +-k0
    assert sf[1, 2, 0] == pytest.approx(expect_amp, rel=1e-10)
    assert sf[-1, -2, 0] == pytest.approx(expect_amp, rel=1e-10)
    masked = sf.copy()
    masked[1, 2, 0] = masked[-1, -2, 0] = 0.0
    assert np.max(masked) < 1e-14 * expect_amp


def test_structure_factor_parseval(rng):
    g = Grid(8, 8, 8)
    f = random_field(g, rng)
    sf = dg.structure_factor(f)
    lhs = float(np.sum(sf)) * g.cell_volume / g.npoints
    assert lhs == pytest.approx(sg.discrete_l2_dot(f, f), rel=1e-10)


def test_structure_factor_translation_invariant(rng):
    g = Grid(8, 8, 8)
    f = random_field(g, rng)
    rolled = TensorField(g, np.roll(f.data, shift=(3, 1, 5), axis=(1, 2, 3)))
    a = dg.structure_factor(f)
    b = dg.structure_factor(rolled)
    np.testing.assert_allclose(a, b, rtol=1e-10, atol=1e-10 * np.max(a))


def test_collect_row_shape(rng, sec61_model):
    g = Grid(4, 4, 4)
    d = dg.collect(random_field(g, rng), sec61_model, step=3, time=0.75)
    row = d.row()
    assert row[0] == 3 and row[1] == 0.75
    assert d.lambda_min <= 0.0 <= d.lambda_max
