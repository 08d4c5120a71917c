"""Initial conditions, the simulation main loop and the convergence harness.

One simulation per invocation; serialization happens between steps, never
concurrently with stepping.  Time is always recomputed as step * tau from an
integer counter so snapshot timestamps are exact.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import diagnostics, simio
from . import grid as sg
from .config import ConfigError, RunConfig
from .grid import Grid, TensorField
from .hstf import HstfTable, LinearOperator
from .operators import PhiTable
from .params import ParamError, select_stabilization, validation_report
from .steppers import StepWorkspace, etd1_step, etdrk2_step

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVARIANT = 2

# slack for the monotone-energy check, scaled by the energy magnitude
ENERGY_SLACK = 1e-10


def initial_condition(kind: str, grid: Grid, amplitude: float) -> TensorField:
    """Closed-form trigonometric starting states sampled at grid points.

    'ic-a': cosine-difference diagonal (generic benchmark state);
    'ic-b': cosine-combination diagonal (ordered state seeding blue phases).
    Both are symmetric with identically zero trace by telescoping.
    """
    x, y, z = grid.meshgrid()
    cx, cy, cz = np.cos(x), np.cos(y), np.cos(z)
    sx, sy, sz = np.sin(x), np.sin(y), np.sin(z)
    if kind == "ic-a":
        q11 = cx - cy
        q22 = cy - cz
    elif kind == "ic-b":
        q11 = cx + cy - 2.0 * cz
        q22 = cy + cz - 2.0 * cx
    else:
        raise ConfigError(f"unknown initial condition {kind!r}")
    comps = [q11, q22, sx * sy, sx * sz, sy * sz]
    return TensorField.from_components(grid, [amplitude * c for c in comps])


def resolve_threads(cfg_threads: int) -> int | None:
    env = os.environ.get("BLUEPHASE_THREADS")
    if env:
        try:
            cfg_threads = int(env)
        except ValueError:
            raise ConfigError(f"BLUEPHASE_THREADS must be an integer, got {env!r}")
    return cfg_threads if cfg_threads > 0 else None


@dataclass
class PreparedRun:
    cfg: RunConfig
    grid: Grid
    q0: TensorField
    stab: object
    report: str
    q0_chiral: float | None


def prepare(cfg: RunConfig) -> PreparedRun:
    cfg.validate()
    model, q0_chiral = cfg.model_params()
    grid = Grid(cfg.nx, cfg.ny, cfg.nz, cfg.lx, cfg.ly, cfg.lz)
    q0 = initial_condition(cfg.ic, grid, cfg.ic_amplitude)
    try:
        stab, checks = select_stabilization(
            model,
            sup_norm_q0=sg.sup_norm(q0),
            kappa1_override=cfg.kappa1,
            kappa2_override=cfg.kappa2,
            force=cfg.force,
        )
    except ParamError as exc:
        raise ConfigError(str(exc)) from exc
    return PreparedRun(
        cfg=cfg,
        grid=grid,
        q0=q0,
        stab=stab,
        report=validation_report(checks),
        q0_chiral=q0_chiral,
    )


def _stepper(scheme: str):
    return etd1_step if scheme == "etd1" else etdrk2_step


def run_simulation(cfg: RunConfig, log=print) -> int:
    """Advance from t=0 to t_final, streaming diagnostics and snapshots.

    Returns the process exit status: 0 on success with the bound and
    monotone-energy checks holding at every recorded step, 2 when either
    broke, raising ConfigError/OSError (exit 1 territory) on bad input.
    """
    prep = prepare(cfg)
    sg.set_fft_workers(resolve_threads(cfg.threads))
    stab, grid = prep.stab, prep.grid
    model = stab.model

    os.makedirs(cfg.outdir, exist_ok=True)
    log(f"stabilization report:\n{prep.report}")

    # run while m * tau <= t_final (exact dyadic taus make this an equality)
    nsteps = int(np.floor(cfg.t_final / cfg.tau + 1e-9))
    table = HstfTable(grid)
    phis = PhiTable.build(LinearOperator(table, stab), cfg.tau)
    ws = StepWorkspace(grid)
    step_fn = _stepper(cfg.scheme)
    mask = grid.dealias_mask().reshape(-1) if cfg.dealias else None

    q = prep.q0
    mbp_ok = True
    energy_ok = True
    prev_energy = None
    eigs_ok = True

    def record(step: int, fld: TensorField, writer):
        nonlocal mbp_ok, energy_ok, prev_energy, eigs_ok
        d = diagnostics.collect(fld, model, step, step * cfg.tau)
        writer.write(d)
        if d.sup_norm > stab.mbp_radius * (1.0 + 1e-12):
            mbp_ok = False
        if prev_energy is not None and d.energy > prev_energy + ENERGY_SLACK * (
            1.0 + abs(prev_energy)
        ):
            energy_ok = False
        prev_energy = d.energy
        if not (-1.0 / 3.0 < d.lambda_min and d.lambda_max < 2.0 / 3.0):
            eigs_ok = False

    ts_path = os.path.join(cfg.outdir, "timeseries.csv")
    with simio.TimeSeriesWriter(ts_path) as writer:
        record(0, q, writer)
        if cfg.snapshot_every and nsteps > 0:
            simio.write_snapshot(
                os.path.join(cfg.outdir, "snapshot_000000.qt5"), q, 0.0, 0
            )
        for step in range(1, nsteps + 1):
            q = step_fn(q, cfg.tau, stab, phis, ws, dealias_mask=mask)
            if step % cfg.diag_every == 0 or step == nsteps:
                record(step, q, writer)
            if cfg.snapshot_every and step % cfg.snapshot_every == 0:
                simio.write_snapshot(
                    os.path.join(cfg.outdir, f"snapshot_{step:06d}.qt5"),
                    q,
                    step * cfg.tau,
                    step,
                )

    simio.write_snapshot(
        os.path.join(cfg.outdir, "snapshot_final.qt5"), q, nsteps * cfg.tau, nsteps
    )
    if cfg.structure_factor:
        sf = diagnostics.structure_factor(q)
        simio.write_structure_factor(
            os.path.join(cfg.outdir, "sfactor_final.bin"),
            grid,
            sf,
            nsteps * cfg.tau,
            nsteps,
        )

    meta = {
        "scheme": cfg.scheme,
        "tau": cfg.tau,
        "t_final": cfg.t_final,
        "steps": nsteps,
        "nx": cfg.nx,
        "ny": cfg.ny,
        "nz": cfg.nz,
        "L1": model.L1,
        "L4": model.L4,
        "alpha": model.alpha,
        "beta": model.beta,
        "gamma": model.gamma,
        "kappa1": stab.kappa1,
        "kappa2": stab.kappa2,
        "mbp_radius": stab.mbp_radius,
        "bulk_offset": stab.bulk_offset,
        "force_bound": stab.force_bound,
        "sup_norm_bounded": mbp_ok,
        "energy_monotone": energy_ok,
        "eigenvalues_physical": eigs_ok,
    }
    if prep.q0_chiral is not None:
        meta["q0_chiral"] = prep.q0_chiral
    simio.write_key_values(os.path.join(cfg.outdir, "run_meta.txt"), meta)

    log(
        f"finished {nsteps} steps: sup-norm bound "
        f"{'held' if mbp_ok else 'VIOLATED'}, energy "
        f"{'monotone' if energy_ok else 'NON-MONOTONE'}, eigenvalues "
        f"{'physical' if eigs_ok else 'OUT OF RANGE'}"
    )
    return EXIT_OK if (mbp_ok and energy_ok) else EXIT_INVARIANT


@dataclass
class ConvergenceResult:
    scheme: str
    taus: list
    errors_sup: list
    errors_l2: list
    rates_sup: list
    rates_l2: list

    def table(self) -> str:
        lines = [f"scheme {self.scheme}"]
        lines.append(
            f"{'tau':>14} {'sup error':>14} {'rate':>7} {'l2 error':>14} {'rate':>7}"
        )
        for i, tau in enumerate(self.taus):
            rs = f"{self.rates_sup[i - 1]:7.3f}" if i else "      -"
            rl = f"{self.rates_l2[i - 1]:7.3f}" if i else "      -"
            lines.append(
                f"{tau:14.8g} {self.errors_sup[i]:14.6e} {rs} "
                f"{self.errors_l2[i]:14.6e} {rl}"
            )
        return "\n".join(lines)


def _advance(q0: TensorField, nsteps: int, tau, stab, phis, ws, step_fn, mask):
    q = q0.copy()
    for _ in range(nsteps):
        q = step_fn(q, tau, stab, phis, ws, dealias_mask=mask)
    return q


def convergence_study(
    cfg: RunConfig, tau1: float, levels: int, ref_level: int, log=print
) -> ConvergenceResult:
    """Dyadic time-step ladder against a fine reference solution.

    Runs tau = tau1 / 2^k for k = 0..levels-1 plus the reference at
    tau1 / 2^ref_level, all from one shared initial state, and reports
    errors at t_final in both norms with the dyadic rates.  The reference
    is always advanced with the second-order scheme so its own error stays
    negligible against every ladder level; a first-order self-reference
    would contaminate the finest rates with a tau - tau_ref signature.
    """
    if levels < 2:
        raise ConfigError("need at least two ladder levels for a rate")
    if ref_level <= levels - 1:
        raise ConfigError("ref_level must exceed the finest ladder level")
    prep = prepare(cfg)
    sg.set_fft_workers(resolve_threads(cfg.threads))
    stab, grid = prep.stab, prep.grid
    table = HstfTable(grid)
    linop = LinearOperator(table, stab)
    ws = StepWorkspace(grid)
    step_fn = _stepper(cfg.scheme)
    mask = grid.dealias_mask().reshape(-1) if cfg.dealias else None

    def solve(tau: float, fn) -> TensorField:
        nsteps = int(round(cfg.t_final / tau))
        if abs(nsteps * tau - cfg.t_final) > 1e-9:
            raise ConfigError(
                f"t_final {cfg.t_final} is not an integer number of steps of {tau}"
            )
        phis = PhiTable.build(linop, tau)
        return _advance(prep.q0, nsteps, tau, stab, phis, ws, fn, mask)

    ref_tau = tau1 / 2.0**ref_level
    log(f"[converge] reference run tau = {ref_tau:g}")
    ref = solve(ref_tau, etdrk2_step)

    taus, errs_sup, errs_l2 = [], [], []
    for k in range(levels):
        tau = tau1 / 2.0**k
        q = solve(tau, step_fn)
        diff = TensorField(grid, q.data - ref.data)
        taus.append(tau)
        errs_sup.append(sg.sup_norm(diff))
        errs_l2.append(sg.discrete_l2_norm(diff))
        log(f"[converge] tau = {tau:g}: sup {errs_sup[-1]:.6e}, l2 {errs_l2[-1]:.6e}")

    rates_sup = [
        float(np.log2(errs_sup[i] / errs_sup[i + 1])) for i in range(levels - 1)
    ]
    rates_l2 = [float(np.log2(errs_l2[i] / errs_l2[i + 1])) for i in range(levels - 1)]
    return ConvergenceResult(cfg.scheme, taus, errs_sup, errs_l2, rates_sup, rates_l2)
