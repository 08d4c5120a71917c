#!/usr/bin/env python3
"""Compare the compiled kernels against the NumPy fallback.

Usage: python benchmarks/bench_kernels.py [N ...]   (default 32 48 64)

Times the per-step hot pieces (basis combination, corrector, bulk force,
eigenvalue scan) plus one full ETDRK2 step per backend, and reports the
speedups.  The backend is forced through BLUEPHASE_FORCE_NUMPY in a
subprocess for the fallback column, so both measurements use identical
code paths above the kernel layer.
"""

import json
import os
import subprocess
import sys
import time

import numpy as np


def _bench_one(n: int) -> dict:
    from bluephase import kernels
    from bluephase.grid import Grid, TensorField
    from bluephase.hstf import HstfTable, LinearOperator
    from bluephase.operators import PhiTable
    from bluephase.params import ModelParams, select_stabilization
    from bluephase.steppers import StepWorkspace, etdrk2_step

    rng = np.random.default_rng(0)
    g = Grid(n, n, n)
    model = ModelParams(L1=1.0, L4=0.25, alpha=-1.0, beta=1.0, gamma=2.25)
    stab, _ = select_stabilization(
        model, radius=2.0, kappa1_override=8.0, kappa2_override=0.5, force=True
    )
    table = HstfTable(g)
    phis = PhiTable.build(LinearOperator(table, stab), 2.0**-5)
    m = g.npoints
    qq = rng.normal(size=(5, m)) + 1j * rng.normal(size=(5, m))
    qn = rng.normal(size=(5, m)) + 1j * rng.normal(size=(5, m))
    qr = rng.normal(size=(5, m))
    field = TensorField(g, rng.uniform(-0.3, 0.3, size=(5,) + g.shape))
    ws = StepWorkspace(g)

    def timeit(fn, repeat=5):
        fn()  # warm up
        best = np.inf
        for _ in range(repeat):
            t0 = time.perf_counter()
            fn()
            best = min(best, time.perf_counter() - t0)
        return best

    out = {"backend": kernels.BACKEND, "n": n}
    out["etd1_combine"] = timeit(
        lambda: kernels.etd1_combine(table.U, phis.phi0, phis.phi1, phis.tau, qq, qn)
    )
    _, cp, cn = kernels.etd1_combine(
        table.U, phis.phi0, phis.phi1, phis.tau, qq, qn, want_coeffs=True
    )
    out["etdrk2_correct"] = timeit(
        lambda: kernels.etdrk2_correct(table.U, phis.phi2, phis.tau, cp, cn, qn)
    )
    out["bulk_force"] = timeit(
        lambda: kernels.bulk_force_field(qr, -1.0, 1.0, 2.25, 8.5)
    )
    out["eigenvalues"] = timeit(lambda: kernels.sym3_eigenvalues(qr))
    out["etdrk2_step"] = timeit(
        lambda: etdrk2_step(field, phis.tau, stab, phis, ws), repeat=3
    )
    return out


def main():
    sizes = [int(a) for a in sys.argv[1:]] or [32, 48, 64]
    if os.environ.get("_BENCH_CHILD"):
        print(json.dumps([_bench_one(n) for n in sizes]))
        return

    rows = {}
    for backend, env in (("cython", {}), ("numpy", {"BLUEPHASE_FORCE_NUMPY": "1"})):
        proc = subprocess.run(
            [sys.executable, __file__, *map(str, sizes)],
            env={**os.environ, **env, "_BENCH_CHILD": "1"},
            capture_output=True,
            text=True,
            check=True,
        )
        rows[backend] = json.loads(proc.stdout.strip().splitlines()[-1])

    keys = ("etd1_combine", "etdrk2_correct", "bulk_force", "eigenvalues", "etdrk2_step")
    for i, n in enumerate(sizes):
        fast, slow = rows["cython"][i], rows["numpy"][i]
        if fast["backend"] != "cython":
            print("compiled extension unavailable; numpy timings only")
        print(f"\nN = {n}^3")
        print(f"{'kernel':<16} {'cython [ms]':>12} {'numpy [ms]':>12} {'speedup':>9}")
        for key in keys:
            a, b = fast[key] * 1e3, slow[key] * 1e3
            print(f"{key:<16} {a:12.3f} {b:12.3f} {b / a:8.2f}x")


if __name__ == "__main__":
    main()
