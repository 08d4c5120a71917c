"""Backend equivalence: compiled kernels against the NumPy reference."""

import numpy as np
import pytest

from bluephase import _kernels_py as ref
from bluephase import kernels

cython_available = kernels.BACKEND == "cython"
needs_cython = pytest.mark.skipif(
    not cython_available, reason="compiled extension not built"
)


@pytest.fixture
def mode_data(rng):
    m = 64
    # random unitary-ish U per mode: actual tables are unitary, equivalence
    # only needs both backends to contract identically
    U = rng.normal(size=(m, 5, 5)) + 1j * rng.normal(size=(m, 5, 5))
    qq = rng.normal(size=(5, m)) + 1j * rng.normal(size=(5, m))
    qn = rng.normal(size=(5, m)) + 1j * rng.normal(size=(5, m))
    phis = rng.uniform(0.0, 1.0, size=(m, 5))
    return U, qq, qn, phis


@needs_cython
def test_project_reconstruct_equivalence(mode_data):
    U, qq, _, _ = mode_data
    np.testing.assert_allclose(
        kernels.project_modes(U, qq), ref.project_modes(U, qq), atol=1e-13
    )
    c = ref.project_modes(U, qq)
    np.testing.assert_allclose(
        kernels.reconstruct_modes(U, c), ref.reconstruct_modes(U, c), atol=1e-13
    )


@needs_cython
def test_apply_phi_equivalence(mode_data):
    U, qq, _, phis = mode_data
    np.testing.assert_allclose(
        kernels.apply_phi_modes(U, phis, qq), ref.apply_phi_modes(U, phis, qq), atol=1e-13
    )


@needs_cython
def test_etd1_combine_equivalence(mode_data, rng):
    U, qq, qn, phis = mode_data
    phi1 = rng.uniform(0.0, 1.0, size=phis.shape)
    a = kernels.etd1_combine(U, phis, phi1, 0.03125, qq, qn)
    b = ref.etd1_combine(U, phis, phi1, 0.03125, qq, qn)
    np.testing.assert_allclose(a, b, atol=1e-13)
    a3 = kernels.etd1_combine(U, phis, phi1, 0.03125, qq, qn, want_coeffs=True)
    b3 = ref.etd1_combine(U, phis, phi1, 0.03125, qq, qn, want_coeffs=True)
    for x, y in zip(a3, b3):
        np.testing.assert_allclose(x, y, atol=1e-13)


@needs_cython
def test_etdrk2_correct_equivalence(mode_data, rng):
    U, qq, qn, phis = mode_data
    _, c_pred, c_n = ref.etd1_combine(U, phis, phis, 0.03125, qq, qn, want_coeffs=True)
    a = kernels.etdrk2_correct(U, phis, 0.03125, c_pred, c_n, qn)
    b = ref.etdrk2_correct(U, phis, 0.03125, c_pred, c_n, qn)
    np.testing.assert_allclose(a, b, atol=1e-13)


@needs_cython
def test_pointwise_kernels_equivalence(rng):
    q = rng.uniform(-1.5, 1.5, size=(5, 257))
    np.testing.assert_allclose(
        kernels.bulk_force_field(q, -1.0, 1.0, 2.25, 8.5),
        ref.bulk_force_field(q, -1.0, 1.0, 2.25, 8.5),
        atol=1e-14,
    )
    np.testing.assert_allclose(kernels.trace_q2_field(q), ref.trace_q2_field(q), atol=1e-14)
    np.testing.assert_allclose(kernels.det_field(q), ref.det_field(q), atol=1e-14)
    for a, b in zip(kernels.sym3_eigenvalues(q), ref.sym3_eigenvalues(q)):
        np.testing.assert_allclose(a, b, atol=1e-13)


@needs_cython
def test_eigenvalues_isotropic_guard():
    q = np.zeros((5, 3))
    q[:, 1] = 1e-16  # below the isotropy floor after squaring
    for arr in kernels.sym3_eigenvalues(q):
        assert np.array_equal(arr, np.zeros(3))
