"""Material parameters, stabilization constants and dimensionless inputs.

The stabilization pair (kappa1, kappa2) shifts part of the identity between
the linear and nonlinear operators.  Sufficient lower bounds make the linear
semigroup contract and keep the nonlinear map inside the invariant ball of
radius ``mbp_radius``; the selector here picks constants satisfying all of
them, and the validator reports each condition when the user overrides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class ParamError(ValueError):
    pass


@dataclass(frozen=True)
class ModelParams:
    """Material coefficients of the free energy."""

    L1: float
    L4: float
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        if self.L1 <= 0:
            raise ParamError(f"L1 must be > 0, got {self.L1}")
        if self.gamma <= 0:
            raise ParamError(f"gamma must be > 0, got {self.gamma}")
        if self.L1 + self.L4 <= 0:
            raise ParamError(f"well-posedness requires L1 + L4 > 0, got {self.L1 + self.L4}")


@dataclass(frozen=True)
class StabilizedParams:
    """ModelParams plus stabilization constants and invariant-ball data.

    mbp_radius is the Frobenius sup-norm radius the solution never leaves;
    bulk_offset is the completed-square constant of the cubic bulk estimate;
    force_bound dominates ||f(Q)||_F <= force_bound * ||Q||_F on the ball.
    """

    model: ModelParams
    kappa1: float
    kappa2: float
    mbp_radius: float
    bulk_offset: float
    force_bound: float

    @property
    def kappa_total(self) -> float:
        return self.kappa1 + self.kappa2


@dataclass(frozen=True)
class DimensionlessParams:
    """Reduced temperature and chirality strength plus normalization inputs."""

    reduced_temp: float
    chirality: float
    L1: float = 0.1
    beta: float = 1.0
    gamma: float = 1.0

    def __post_init__(self):
        if self.chirality < 0:
            raise ParamError("chirality strength must be >= 0")
        if self.L1 <= 0 or self.beta <= 0 or self.gamma <= 0:
            raise ParamError("normalization inputs L1, beta, gamma must be > 0")


@dataclass(frozen=True)
class BoundCheck:
    name: str
    required: float
    actual: float
    ok: bool

    def line(self) -> str:
        return (
            f"{self.name:<28} required {self.required:>14.6g}  "
            f"actual {self.actual:>14.6g}  {'PASS' if self.ok else 'FAIL'}"
        )


def kappa2_min(p: ModelParams) -> float:
    """Least kappa2 making the shifted linear operator dissipative."""
    if p.L1 <= 0:
        raise ParamError("kappa2_min requires L1 > 0")
    return p.L4 * p.L4 / (2.0 * p.L1)


def bulk_offset(p: ModelParams, kappa2: float) -> float:
    return p.beta**2 / p.gamma**2 - 2.0 * (p.alpha - kappa2) / p.gamma


def force_bound(p: ModelParams, radius: float, offset: float) -> float:
    return abs(p.alpha) + abs(p.beta) * radius + p.gamma * radius**2 + p.gamma * abs(offset)


def kappa1_bounds(p: ModelParams, kappa2: float, radius: float) -> tuple[float, float]:
    """(invariant-ball bound, energy-estimate bound) for kappa1."""
    b = bulk_offset(p, kappa2)
    cf = force_bound(p, radius, b)
    gap = radius**2 - b
    if gap <= 0:
        raise ParamError(f"radius {radius} violates bulk_offset < radius^2 (offset {b})")
    mbp = (kappa2 + cf) ** 2 / (p.gamma * gap)
    energy = abs(p.alpha) + abs(p.beta) * radius**2 + 2.0 * p.gamma * radius**2
    return mbp, energy


def select_stabilization(
    p: ModelParams,
    sup_norm_q0: float | None = None,
    radius: float | None = None,
    kappa1_override: float | None = None,
    kappa2_override: float | None = None,
    force: bool = False,
) -> tuple[StabilizedParams, list[BoundCheck]]:
    """Choose (kappa1, kappa2, radius) satisfying every sufficient condition.

    The radius rule max(2*sup||Q0||_F, sqrt(2|b|+1)) guarantees both that the
    initial state sits inside the ball and that bulk_offset < radius^2 with
    margin, deterministically.  Overrides below the theoretical lower bounds
    are rejected unless ``force`` downgrades the rejection to a report entry.
    Returns the parameters and the per-condition validation report.
    """
    if sup_norm_q0 is None and radius is None:
        raise ParamError("need the initial sup norm or an explicit radius")

    checks: list[BoundCheck] = []
    checks.append(BoundCheck("L1 > 0", 0.0, p.L1, p.L1 > 0))
    checks.append(BoundCheck("gamma > 0", 0.0, p.gamma, p.gamma > 0))
    checks.append(BoundCheck("L1 + L4 > 0", 0.0, p.L1 + p.L4, p.L1 + p.L4 > 0))

    k2min = kappa2_min(p)
    if kappa2_override is None:
        kappa2 = max(k2min, 0.0)
    else:
        kappa2 = kappa2_override
    checks.append(BoundCheck("kappa2 >= L4^2/(2 L1)", k2min, kappa2, kappa2 >= k2min))

    b = bulk_offset(p, kappa2)
    if radius is None:
        radius = max(2.0 * sup_norm_q0, math.sqrt(2.0 * abs(b) + 1.0))
    if not b < radius**2:
        # cannot happen for the rule above; guards explicit radii
        raise ParamError(f"no valid ball: bulk_offset {b} >= radius^2 {radius ** 2}")
    checks.append(BoundCheck("bulk_offset < radius^2", b, radius**2, b < radius**2))

    cf = force_bound(p, radius, b)
    k1_mbp, k1_energy = kappa1_bounds(p, kappa2, radius)
    if kappa1_override is None:
        kappa1 = max(k1_mbp, k1_energy)
    else:
        kappa1 = kappa1_override
    checks.append(BoundCheck("kappa1 >= ball bound", k1_mbp, kappa1, kappa1 >= k1_mbp))
    checks.append(
        BoundCheck("kappa1 >= energy bound", k1_energy, kappa1, kappa1 >= k1_energy)
    )

    failed = [c for c in checks if not c.ok]
    if failed and not force:
        report = "\n".join(c.line() for c in checks)
        raise ParamError(f"stabilization bounds not satisfied:\n{report}")

    sp = StabilizedParams(
        model=p,
        kappa1=kappa1,
        kappa2=kappa2,
        mbp_radius=radius,
        bulk_offset=b,
        force_bound=cf,
    )
    return sp, checks


def validation_report(checks: list[BoundCheck]) -> str:
    return "\n".join(c.line() for c in checks)


def from_dimensionless(d: DimensionlessParams) -> tuple[ModelParams, float]:
    """Material coefficients and chiral wavenumber q0 from reduced inputs.

    alpha = reduced_temp * beta^2 / (24 gamma); the chirality strength fixes
    q0 through chirality^2 = 108 L1 gamma q0^2 / beta^2, and L4 = 2 L1 q0.
    """
    alpha = d.reduced_temp * d.beta**2 / (24.0 * d.gamma)
    q0 = math.sqrt(d.chirality**2 * d.beta**2 / (108.0 * d.L1 * d.gamma))
    L4 = 2.0 * d.L1 * q0
    return ModelParams(L1=d.L1, L4=L4, alpha=alpha, beta=d.beta, gamma=d.gamma), q0


def to_dimensionless(p: ModelParams, q0: float) -> tuple[float, float]:
    """Inverse of :func:`from_dimensionless` (reduced_temp, chirality)."""
    reduced_temp = 24.0 * p.alpha * p.gamma / p.beta**2
    chirality = math.sqrt(108.0 * p.L1 * p.gamma * q0**2 / p.beta**2)
    return reduced_temp, chirality


def classify_phase(chirality: float) -> str:
    """Advisory phase label from the chirality stability ranges."""
    if chirality < 0:
        raise ParamError("chirality strength must be >= 0")
    if chirality < 0.6:
        return "sub-BPI"
    if chirality < 1.2:
        return "BPI"
    if chirality < 1.8:
        return "BPII"
    return "BPIII"
