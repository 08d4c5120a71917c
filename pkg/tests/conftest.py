import numpy as np
import pytest

from bluephase.grid import Grid, TensorField
from bluephase.params import ModelParams, select_stabilization


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


@pytest.fixture(scope="session")
def sec61_model():
    """Benchmark coefficient set used throughout the verification runs."""
    return ModelParams(L1=1.0, L4=0.25, alpha=-1.0, beta=1.0, gamma=2.25)


@pytest.fixture(scope="session")
def sec61_stab(sec61_model):
    """Benchmark stabilization (literature constants, below the bounds)."""
    stab, _ = select_stabilization(
        sec61_model,
        radius=2.0153730163574504,
        kappa1_override=8.0,
        kappa2_override=0.5,
        force=True,
    )
    return stab


def random_field(grid: Grid, rng, scale=0.5) -> TensorField:
    return TensorField(grid, rng.uniform(-scale, scale, size=(5,) + grid.shape))


def random_hermitian_modes(grid: Grid, rng, scale=1.0) -> np.ndarray:
    """Spectral data of a real field (guaranteed Hermitian symmetric)."""
    from bluephase.grid import forward

    f = random_field(grid, rng, scale)
    return forward(f).data
