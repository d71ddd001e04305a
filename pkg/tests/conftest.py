# Test configuration and shared fixtures
import math

import numpy as np
import pytest
from src.config import get_settings
from src.schemas.models.specs import LatticeSpec
from src.schemas.params.physics import PhysicalParams

SQRT_N = math.sqrt(1000.0)


@pytest.fixture
def sweep_params() -> PhysicalParams:
    """Omega-sweep regime: delta = 2000 sqrt(N), Delta = -0.05, alpha = 0.1, Omega = g."""
    return PhysicalParams(g13=1.0, g24=1.0, n_atoms=1000, delta=2000.0 * SQRT_N, big_delta=-0.05, omega=SQRT_N, alpha=0.1)


@pytest.fixture
def dynamics_params() -> PhysicalParams:
    """Three-cavity dynamics regime: Omega = 1.5 sqrt(N), delta = 1e4, Delta = -46, alpha = -2.2e-3."""
    return PhysicalParams()


@pytest.fixture
def lossy_params() -> PhysicalParams:
    """g = Omega with cavity decay and level-4 emission, zeta = 1 / sqrt(0.01 * 0.04) = 50."""
    return PhysicalParams(n_atoms=1000, omega=SQRT_N, delta=1.0e4, big_delta=-1.0, kappa=0.01, gamma4=0.04)


@pytest.fixture
def chain3() -> LatticeSpec:
    return LatticeSpec.chain(3)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(get_settings().seed)
