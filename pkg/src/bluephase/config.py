"""Run configuration: flat key=value files plus command-line overrides.

Later sources win.  Validation is total: every invalid field yields a named
error before any run starts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .params import DimensionlessParams, ModelParams, ParamError, from_dimensionless


class ConfigError(ValueError):
    pass


_BOOL = {"true": True, "1": True, "yes": True, "false": False, "0": False, "no": False}

SCHEMES = ("etd1", "etdrk2")
IC_KINDS = ("ic-a", "ic-b")


@dataclass
class RunConfig:
    nx: int = 32
    ny: int = 32
    nz: int = 32
    lx: float = 2.0 * math.pi
    ly: float = 2.0 * math.pi
    lz: float = 2.0 * math.pi
    scheme: str = "etdrk2"
    tau: float = 2.0**-5
    t_final: float = 1.0
    ic: str = "ic-a"
    ic_amplitude: float = 1.0 / 3.0
    # direct material coefficients ...
    L1: float | None = None
    L4: float | None = None
    alpha: float | None = None
    beta: float = 1.0
    gamma: float = 1.0
    # ... or dimensionless inputs (mutually exclusive with alpha/L4)
    tau_c: float | None = None
    kappa: float | None = None
    # optional stabilization overrides
    kappa1: float | None = None
    kappa2: float | None = None
    force: bool = False
    diag_every: int = 1
    snapshot_every: int = 0
    outdir: str = "out"
    dealias: bool = False
    structure_factor: bool = False
    threads: int = 0

    def validate(self):
        for name in ("nx", "ny", "nz"):
            n = getattr(self, name)
            if n < 2 or n % 2:
                raise ConfigError(f"{name} must be a positive even integer, got {n}")
        for name in ("lx", "ly", "lz"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.scheme not in SCHEMES:
            raise ConfigError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.tau <= 0:
            raise ConfigError(f"tau must be positive, got {self.tau}")
        if self.t_final < 0:
            raise ConfigError(f"t_final must be >= 0, got {self.t_final}")
        if self.ic not in IC_KINDS:
            raise ConfigError(f"ic must be one of {IC_KINDS}, got {self.ic!r}")
        if not math.isfinite(self.ic_amplitude):
            raise ConfigError("ic_amplitude must be finite")
        if self.diag_every < 1:
            raise ConfigError("diag_every must be >= 1")
        if self.snapshot_every < 0:
            raise ConfigError("snapshot_every must be >= 0")
        if self.threads < 0:
            raise ConfigError("threads must be >= 0")
        dimless = self.tau_c is not None or self.kappa is not None
        direct = self.alpha is not None or self.L4 is not None
        if dimless and direct:
            raise ConfigError(
                "give either (tau_c, kappa) or (alpha, L4), not a mixture"
            )
        if dimless:
            if self.tau_c is None or self.kappa is None:
                raise ConfigError("dimensionless input needs both tau_c and kappa")
            if self.L1 is None:
                raise ConfigError("dimensionless input needs L1")
        else:
            missing = [n for n in ("L1", "L4", "alpha") if getattr(self, n) is None]
            if missing:
                raise ConfigError(f"material coefficients missing: {', '.join(missing)}")

    def model_params(self) -> tuple[ModelParams, float | None]:
        """(coefficients, chiral wavenumber q0 when derived, else None)."""
        self.validate()
        try:
            if self.tau_c is not None:
                d = DimensionlessParams(
                    reduced_temp=self.tau_c,
                    chirality=self.kappa,
                    L1=self.L1,
                    beta=self.beta,
                    gamma=self.gamma,
                )
                return from_dimensionless(d)
            return (
                ModelParams(
                    L1=self.L1,
                    L4=self.L4,
                    alpha=self.alpha,
                    beta=self.beta,
                    gamma=self.gamma,
                ),
                None,
            )
        except ParamError as exc:
            raise ConfigError(str(exc)) from exc


_FIELD_TYPES = {
    "nx": int,
    "ny": int,
    "nz": int,
    "n": int,  # shorthand setting all three
    "lx": float,
    "ly": float,
    "lz": float,
    "scheme": str,
    "tau": float,
    "t_final": float,
    "ic": str,
    "ic_amplitude": float,
    "L1": float,
    "L4": float,
    "alpha": float,
    "beta": float,
    "gamma": float,
    "tau_c": float,
    "kappa": float,
    "kappa1": float,
    "kappa2": float,
    "force": bool,
    "diag_every": int,
    "snapshot_every": int,
    "outdir": str,
    "dealias": bool,
    "structure_factor": bool,
    "threads": int,
}


def _coerce(key: str, raw: str):
    typ = _FIELD_TYPES[key]
    raw = raw.strip()
    try:
        if typ is bool:
            if raw.lower() not in _BOOL:
                raise ValueError(raw)
            return _BOOL[raw.lower()]
        if typ is int:
            return int(raw)
        if typ is float:
            return float(raw)
        return raw
    except ValueError as exc:
        raise ConfigError(f"cannot parse {key} = {raw!r} as {typ.__name__}") from exc


def apply_assignments(cfg: RunConfig, pairs: dict[str, str]) -> RunConfig:
    for key, raw in pairs.items():
        if key not in _FIELD_TYPES:
            raise ConfigError(f"unknown config key {key!r}")
        val = _coerce(key, raw)
        if key == "n":
            cfg.nx = cfg.ny = cfg.nz = val
        else:
            setattr(cfg, key, val)
    return cfg


def load_config(path, overrides: list[str] | None = None) -> RunConfig:
    """Parse a key=value file, then apply 'key=value' override strings."""
    pairs: dict[str, str] = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value, got {line!r}")
            key, val = line.split("=", 1)
            pairs[key.strip()] = val
    cfg = apply_assignments(RunConfig(), pairs)
    for item in overrides or []:
        if "=" not in item:
            raise ConfigError(f"override {item!r} must look like key=value")
        key, val = item.split("=", 1)
        apply_assignments(cfg, {key.strip(): val})
    cfg.validate()
    return cfg
