import math

import numpy as np
import pytest
from src.schemas.evolve.timeseries import PropagatorConfig
from src.schemas.models.specs import LatticeSpec
from src.services.evolve import evolve
from src.services.models import build_full_hamiltonian, prepare_state
from src.services.sweep import compare_full_vs_effective, model_spec, run_model

THREE_CAVITY_PLACEMENTS = [("b", 0), ("b", 1), ("c", 2)]


@pytest.mark.slow
def test_three_cavity_comparison(dynamics_params, chain3):
    """Full and effective dynamics agree within 0.04 over t in [0, 600]."""
    result = compare_full_vs_effective(dynamics_params, chain3, THREE_CAVITY_PLACEMENTS, t_max=600.0, n_samples=601)

    for obs in ("N_b", "N_c", "F_b", "F_c"):
        assert result.max_abs_diff[f"{obs}_1"] <= 0.04
    assert result.full_charge_drift <= 1e-8
    assert result.effective_charge_drift <= 1e-8
    np.testing.assert_allclose(result.full.column("norm"), 1.0, atol=1e-8)


def test_no_hopping_keeps_occupations(dynamics_params, chain3):
    """Without photon tunneling both models keep every polariton in its cavity."""
    p = dynamics_params.replace(alpha=0.0)
    result = compare_full_vs_effective(p, chain3, THREE_CAVITY_PLACEMENTS, t_max=600.0, n_samples=61)

    assert max(result.max_abs_diff.values()) <= 1e-3
    np.testing.assert_allclose(result.effective.column("N_b_1"), 1.0, atol=1e-12)
    np.testing.assert_allclose(result.effective.column("N_c_3"), 1.0, atol=1e-12)


def test_single_cavity_dark_polariton(dynamics_params):
    """A lone b polariton stays put in both models."""
    lattice = LatticeSpec(n_sites=1)
    result = compare_full_vs_effective(dynamics_params, lattice, [("b", 0)], t_max=100.0, n_samples=21)

    b_sq = dynamics_params.n_atoms * dynamics_params.g13**2 + dynamics_params.omega**2
    bound = 10.0 * b_sq / dynamics_params.delta**2
    assert result.max_abs_diff["N_b_1"] <= bound
    assert result.max_abs_diff["N_c_1"] <= bound


@pytest.mark.slow
def test_krylov_matches_dense_on_full_model(dynamics_params, chain3):
    """Both backends give the same full-model trajectory."""
    spec = model_spec(dynamics_params, chain3, "full", 3)
    times = list(np.linspace(0.0, 2.0, 5))

    dense = run_model(spec, THREE_CAVITY_PLACEMENTS, times)
    krylov = run_model(spec, THREE_CAVITY_PLACEMENTS, times, PropagatorConfig(method="krylov", tolerance=1e-12))

    for name in dense.names:
        np.testing.assert_allclose(dense.column(name), krylov.column(name), atol=1e-8)


def test_effective_charge_conserved(dynamics_params, chain3):
    """The effective model keeps its particle number over a long run."""
    spec = model_spec(dynamics_params, chain3, "effective", 3)
    series = run_model(spec, THREE_CAVITY_PLACEMENTS, list(np.linspace(0.0, 600.0, 61)))

    charge = series.column("charge")
    assert float(np.max(np.abs(charge - 3.0))) <= 1e-8
    assert math.isclose(series.records[-1]["norm"], 1.0, abs_tol=1e-8)


@pytest.mark.slow
def test_full_model_energy_and_norm_drift(dynamics_params, chain3):
    """Energy and norm stay fixed over the three-cavity run length."""
    spec = model_spec(dynamics_params, chain3, "full", 3)
    hamiltonian = build_full_hamiltonian(spec)
    psi0 = prepare_state(spec, THREE_CAVITY_PLACEMENTS)
    series = evolve(hamiltonian, psi0, list(np.linspace(0.0, 600.0, 61)), [("energy", hamiltonian)])

    energy = series.column("energy")
    assert float(np.max(np.abs(energy - energy[0]))) <= 1e-8
    np.testing.assert_allclose(series.column("norm"), 1.0, atol=1e-8)
