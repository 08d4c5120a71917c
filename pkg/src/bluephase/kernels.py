"""Kernel backend selection.

The compiled Cython extension is preferred; the NumPy fallback is used when
it is missing or when ``BLUEPHASE_FORCE_NUMPY`` is set.  Both expose the
same functions (see :mod:`bluephase._kernels_py` for the layout contract).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("BLUEPHASE_FORCE_NUMPY"):
    _impl = _kernels_py
    BACKEND = "numpy"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "numpy"

dof_to_stf = _kernels_py.dof_to_stf
stf_to_dof = _kernels_py.stf_to_dof

project_modes = _impl.project_modes
reconstruct_modes = _impl.reconstruct_modes
apply_phi_modes = _impl.apply_phi_modes
etd1_combine = _impl.etd1_combine
etdrk2_correct = _impl.etdrk2_correct
bulk_force_field = _impl.bulk_force_field
trace_q2_field = _impl.trace_q2_field
det_field = _impl.det_field
sym3_eigenvalues = _impl.sym3_eigenvalues
