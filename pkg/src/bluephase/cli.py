"""Command-line entry points.

Exit codes: 0 = success with all invariant checks passing, 2 = an invariant
(sup-norm bound or energy monotonicity) broke during the run, 1 = usage,
configuration or I/O errors.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import diagnostics, simio
from .config import ConfigError, load_config
from .grid import Grid, TensorField, sup_norm
from .params import ParamError
from .runner import (
    EXIT_INVARIANT,
    EXIT_OK,
    EXIT_USAGE,
    convergence_study,
    run_simulation,
)


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="bluephase",
        description="Pseudo-spectral exponential integrators for chiral "
        "liquid-crystal blue-phase dynamics",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="advance a configuration to its final time")
    run.add_argument("config", help="key=value configuration file")
    run.add_argument("overrides", nargs="*", help="key=value overrides (later wins)")

    conv = sub.add_parser("converge", help="dyadic time-step convergence study")
    conv.add_argument("config")
    conv.add_argument("overrides", nargs="*")
    conv.add_argument("--tau1", type=float, default=2.0**-4, help="coarsest step")
    conv.add_argument("--levels", type=int, default=6, help="ladder levels k=0..levels-1")
    conv.add_argument("--ref-level", type=int, default=8, help="reference at tau1/2^r")
    conv.add_argument("--out", default=None, help="write the rate table to this file")

    orc = sub.add_parser("oracle-check", help="dense-reference agreement on a tiny grid")
    orc.add_argument("--grid", type=int, default=2, choices=(2, 3, 4))
    orc.add_argument("--states", type=int, default=3, help="random states per scheme")

    info = sub.add_parser("info", help="describe a snapshot file")
    info.add_argument("snapshot")

    sca = sub.add_parser("scalars", help="export a derived scalar volume from a snapshot")
    sca.add_argument("snapshot")
    sca.add_argument("--field", choices=("s", "beta_b"), default="s")
    sca.add_argument("--out", required=True)
    return ap


def _cmd_run(args) -> int:
    cfg = load_config(args.config, args.overrides)
    return run_simulation(cfg)


def _cmd_converge(args) -> int:
    cfg = load_config(args.config, args.overrides)
    result = convergence_study(cfg, args.tau1, args.levels, args.ref_level)
    table = result.table()
    print(table)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(table + "\n")
    return EXIT_OK


def _cmd_oracle_check(args) -> int:
    from .hstf import HstfTable, LinearOperator
    from .operators import PhiTable
    from .oracle import oracle_etd_step
    from .params import ModelParams, select_stabilization
    from .steppers import etd1_step, etdrk2_step

    n = args.grid
    grid = Grid(n, n, n, require_even=False)
    model = ModelParams(L1=1.0, L4=0.25, alpha=-1.0, beta=1.0, gamma=2.25)
    stab, _ = select_stabilization(
        model, radius=2.0, kappa1_override=8.0, kappa2_override=0.5, force=True
    )
    tau = 2.0**-5
    phis = PhiTable.build(LinearOperator(HstfTable(grid), stab), tau)
    rng = np.random.default_rng(7)
    worst = 0.0
    for scheme, step in ((1, etd1_step), (2, etdrk2_step)):
        for _ in range(args.states):
            q = TensorField(grid, rng.uniform(-0.5, 0.5, size=(5,) + grid.shape))
            fast = step(q, tau, stab, phis)
            dense = oracle_etd_step(scheme, q, tau, stab)
            worst = max(worst, float(np.max(np.abs(fast.data - dense.data))))
    print(f"oracle-check grid {n}^3: max |fast - dense| = {worst:.3e}")
    if worst > 1e-11:
        print("oracle-check FAILED (tolerance 1e-11)")
        return EXIT_INVARIANT
    print("oracle-check passed (tolerance 1e-11)")
    return EXIT_OK


def _cmd_info(args) -> int:
    field, meta = simio.read_snapshot(args.snapshot)
    g = meta.grid
    print(f"snapshot      {args.snapshot}")
    print(f"grid          {g.nx} x {g.ny} x {g.nz}")
    print(f"box           {g.lx:.6g} x {g.ly:.6g} x {g.lz:.6g}")
    print(f"time          {meta.time:.17g}")
    print(f"step          {meta.step}")
    print(f"components    {meta.ncomp}")
    print(f"sup norm      {sup_norm(field):.17g}")
    lmin, lmax = diagnostics.eigen_range(field)
    print(f"eigen range   [{lmin:.17g}, {lmax:.17g}]")
    return EXIT_OK


def _cmd_scalars(args) -> int:
    field, meta = simio.read_snapshot(args.snapshot)
    if args.field == "s":
        values = diagnostics.order_parameter_field(field)
    else:
        values = diagnostics.biaxiality_field(field)
    simio.write_scalar_volume(args.out, meta.grid, values, meta.time, meta.step)
    print(f"wrote {args.field} volume to {args.out}")
    return EXIT_OK


_COMMANDS = {
    "run": _cmd_run,
    "converge": _cmd_converge,
    "oracle-check": _cmd_oracle_check,
    "info": _cmd_info,
    "scalars": _cmd_scalars,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, ParamError, simio.SnapshotError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
