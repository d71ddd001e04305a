"""Omega sweep of the effective parameters and full-versus-effective dynamics comparison."""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Literal, Optional, Sequence

import numpy as np
from src.exceptions import DegenerateDetuning, NoCrossover
from src.schemas.evolve.timeseries import PropagatorConfig, TimeSeries
from src.schemas.models.specs import EffectiveModelSpec, FullModelSpec, LatticeSpec, ModelSpec, Placement
from src.schemas.params.physics import PhysicalParams, TunnelingConvention
from src.schemas.sweep.results import ComparisonResult, SweepResult, SweepRow
from src.services.evolve.observables import all_observables
from src.services.evolve.propagator import evolve
from src.services.fock.operators import SparseOperator, weighted_number_op
from src.services.models.effective import build_effective_hamiltonian
from src.services.models.full import build_full_hamiltonian
from src.services.models.polaritons import prepare_state
from src.services.params.mapping import check_validity, map_effective
from src.services.params.optimize import crossover_region
from src.utils.logging import OperationTimer, StructuredLogger

logger = logging.getLogger(__name__)
structured_logger = StructuredLogger(__name__)

COMPARED_OBSERVABLES = ("N_b", "N_c", "F_b", "F_c")


def _workers(max_workers: Optional[int]) -> Optional[int]:
    # 0 or None lets the executor pick one per CPU
    return max_workers or None


def omega_grid(omega_min: float, omega_max: float, n_points: int, log_spaced: bool = True) -> np.ndarray:
    if n_points == 1:
        return np.array([omega_min])
    if log_spaced:
        return np.geomspace(omega_min, omega_max, n_points)
    return np.linspace(omega_min, omega_max, n_points)


def sweep_row(p: PhysicalParams, omega: float, threshold: Optional[float] = None) -> SweepRow:
    point = p.replace(omega=float(omega))
    try:
        effective = map_effective(point)
    except DegenerateDetuning as e:
        return SweepRow(omega_over_g13=float(omega), error=f"DegenerateDetuning: {e}")

    report = check_validity(point, threshold)
    return SweepRow(
        omega_over_g13=float(omega),
        effective=effective,
        mu_gap=effective.mu_gap,
        validity_flags=report.flags(),
        overall_pass=report.overall_pass,
    )


def sweep_omega(
    p: PhysicalParams,
    omega_grid: Sequence[float],
    threshold: Optional[float] = None,
    max_workers: Optional[int] = None,
) -> SweepResult:
    """Evaluate the parameter map at every Omega of a strictly increasing positive grid.

    Degenerate points become flagged rows instead of aborting the sweep.

    :param p: Base parameters; Omega is replaced per row
    :param omega_grid: Omega values in g13 units
    :param threshold: Validity threshold, defaults to 0.1
    :param max_workers: Thread count, 0 or None for automatic
    """
    grid = [float(omega) for omega in omega_grid]
    if not grid:
        raise ValueError("omega grid is empty")
    if any(omega <= 0.0 for omega in grid):
        raise ValueError("omega grid must be positive")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("omega grid must be strictly increasing")

    with OperationTimer("sweep_omega", structured_logger, n_points=len(grid)):
        with ThreadPoolExecutor(max_workers=_workers(max_workers)) as executor:
            rows = list(executor.map(lambda omega: sweep_row(p, omega, threshold), grid))

    flagged = sum(row.flagged for row in rows)
    if flagged:
        logger.warning(f"{flagged} of {len(rows)} sweep points are degenerate")

    try:
        window, window_error = crossover_region(p), None
    except NoCrossover as e:
        window, window_error = None, f"NoCrossover: {e}"

    return SweepResult(rows=rows, crossover=window, crossover_error=window_error)


def _charge_operator(spec: ModelSpec) -> SparseOperator:
    # weights are all 1 in the effective model, so this is the total particle number there
    return weighted_number_op(spec.mode_space())


def model_spec(
    p: PhysicalParams,
    lattice: LatticeSpec,
    model: Literal["full", "effective"],
    cap: int,
    tunneling: TunnelingConvention = "photon_weight",
    include_two_photon_detuning: bool = True,
) -> ModelSpec:
    """Spec of either model truncated at ``cap`` excitations.

    The effective model carries the pair-conversion term whenever the mapping marks it active.
    """
    if model == "full":
        return FullModelSpec(params=p, lattice=lattice, max_excitations=cap)

    effective = map_effective(p, tunneling)
    return EffectiveModelSpec(
        params=effective,
        lattice=lattice,
        max_particles=cap,
        include_two_photon_detuning=include_two_photon_detuning,
        include_pair_conversion=effective.pair_conv_active,
    )


def run_model(
    spec: ModelSpec,
    placements: Sequence[Placement],
    times: Sequence[float],
    config: Optional[PropagatorConfig] = None,
) -> TimeSeries:
    """Evolve one placement and record per-cavity N, n^2, F and the conserved charge."""
    if isinstance(spec, FullModelSpec):
        hamiltonian = build_full_hamiltonian(spec)
    else:
        hamiltonian = build_effective_hamiltonian(spec)

    psi0 = prepare_state(spec, placements)
    observables = all_observables(spec) + [("charge", _charge_operator(spec))]
    return evolve(hamiltonian, psi0, times, observables, config).with_fluctuations()


def compare_full_vs_effective(
    p: PhysicalParams,
    lattice: LatticeSpec,
    placements: Sequence[Placement],
    t_max: float,
    n_samples: int,
    config: Optional[PropagatorConfig] = None,
    tunneling: TunnelingConvention = "photon_weight",
    threshold: Optional[float] = None,
    max_workers: Optional[int] = None,
) -> ComparisonResult:
    """Evolve the same polariton placement in the full and the effective model.

    The truncation is the number of placed polaritons, which both dynamics conserve.
    A failing validity report is logged, not raised.

    :param p: Microscopic parameters
    :param lattice: Cavity array
    :param placements: (species, site) pairs, sites 0-based, species b or c
    :param t_max: Final time in 1/g13
    :param n_samples: Number of equally spaced samples on [0, t_max]
    :param config: Propagator settings
    :param tunneling: Tunneling assignment of the effective model
    :returns: ComparisonResult with full minus effective columns
    """
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    for species, site in placements:
        if species not in ("b", "c"):
            raise ValueError(f"placements must use species b or c, got {species}")

    validity = check_validity(p, threshold)
    if not validity.overall_pass:
        logger.warning(f"Effective model validity conditions failed: {', '.join(validity.failed)}")

    cap = len(placements)
    specs = [model_spec(p, lattice, "full", cap), model_spec(p, lattice, "effective", cap, tunneling)]
    times = [float(t) for t in np.linspace(0.0, t_max, n_samples)]

    with OperationTimer("compare_full_vs_effective", structured_logger, n_sites=lattice.n_sites, n_samples=n_samples):
        with ThreadPoolExecutor(max_workers=min(2, _workers(max_workers) or 2)) as executor:
            full, effective = executor.map(lambda spec: run_model(spec, placements, times, config), specs)

    names = [f"{obs}_{cavity}" for cavity in range(1, lattice.n_sites + 1) for obs in COMPARED_OBSERVABLES]
    differences: Dict[str, List[float]] = {
        name: [float(d) for d in full.column(name) - effective.column(name)] for name in names
    }
    max_abs_diff = {name: float(np.max(np.abs(values))) for name, values in differences.items()}

    def drift(series: TimeSeries) -> float:
        charge = series.column("charge")
        return float(np.max(np.abs(charge - charge[0])))

    return ComparisonResult(
        times=times,
        n_cavities=lattice.n_sites,
        full=full,
        effective=effective,
        differences=differences,
        max_abs_diff=max_abs_diff,
        validity=validity,
        full_charge_drift=drift(full),
        effective_charge_drift=drift(effective),
    )
