"""Species-selective number measurement: Raman swap, STIRAP mapping and level-2 readout."""

import logging
import math
from typing import Dict, Literal, Mapping, Optional, Tuple

import numpy as np
from scipy.linalg import eigh, expm
from scipy.optimize import minimize_scalar
from src.exceptions import CalibrationFailure, TruncationExceeded
from src.schemas.measure.protocol import AtomCavityExact, Distribution, ProtocolResult, ProtocolStep, PulseSpec, StirapSpec
from src.schemas.models.specs import ModelSpec, StateVector
from src.schemas.params.physics import PhysicalParams
from src.services.measure.atoms import (
    collective_raise,
    embed,
    ground_state,
    level_count,
    photon_op,
    sigma,
    single_atom_sigma,
)
from src.services.models.polaritons import species_number_op
from src.utils.logging import OperationTimer, StructuredLogger

logger = logging.getLogger(__name__)
structured_logger = StructuredLogger(__name__)

CALIBRATION_WINDOW = (0.1, 10.0)
CALIBRATION_GRID = 4001
FIDELITY_TARGET = 0.999
STEP_TOLERANCE = 1e-8
INITIAL_STEPS = 32
MAX_STEPS = 2**17
EIGENVALUE_TOLERANCE = 1e-8

Coefficients = Mapping[Tuple[int, int], complex]


def make_system(params: PhysicalParams, n_atoms: Literal[1, 2] = 1, photon_cap: int = 3) -> AtomCavityExact:
    """All atoms in level 1, no photons."""
    return AtomCavityExact(params=params, n_atoms=n_atoms, photon_cap=photon_cap, state=ground_state(n_atoms, photon_cap))


def _distribution(probabilities: np.ndarray, counts: np.ndarray) -> Distribution:
    result: Distribution = {}
    for n in range(int(counts.max()) + 1):
        result[n] = float(probabilities[counts == n].sum())
    return result


def prepare_polariton_state(sys: AtomCavityExact, coeffs: Coefficients) -> AtomCavityExact:
    """Superpose normalized (b+)^n_b (c+)^n_c |1..1, 0> terms with the given amplitudes.

    b+ = (g S12+ - Omega a+)/B and c+ = (Omega S12+ + g a+)/B with the collective
    S12+ = n^{-1/2} sum_j sigma_21^j and g = sqrt(N) g13.

    :param sys: System whose parameters fix g and Omega
    :param coeffs: {(n_b, n_c): amplitude}
    :raises TruncationExceeded: if a term needs more excitations than the photon cap or the atom count allows
    """
    if not coeffs:
        raise ValueError("coeffs must contain at least one term")

    n_atoms, cap = sys.n_atoms, sys.photon_cap
    limit = min(n_atoms, cap)
    for n_b, n_c in coeffs:
        if n_b < 0 or n_c < 0:
            raise ValueError(f"excitation numbers must be non-negative, got {(n_b, n_c)}")
        if n_b + n_c > limit:
            raise TruncationExceeded(f"{n_b + n_c} excitations exceed min(n_atoms={n_atoms}, photon_cap={cap})")

    g = math.sqrt(sys.params.n_atoms) * sys.params.g13
    omega = sys.params.omega
    b_scale = math.hypot(g, omega)
    s12_dag = collective_raise(n_atoms, cap, 2, 1)
    a_dag = photon_op(n_atoms, cap).conj().T
    b_dag = (g * s12_dag - omega * a_dag) / b_scale
    c_dag = (omega * s12_dag + g * a_dag) / b_scale

    vacuum = ground_state(n_atoms, cap)
    state = np.zeros(sys.dim, dtype=np.complex128)
    weights: Dict[Tuple[int, int], float] = {}
    for (n_b, n_c), amplitude in coeffs.items():
        term = np.linalg.matrix_power(b_dag, n_b) @ np.linalg.matrix_power(c_dag, n_c) @ vacuum
        state += complex(amplitude) * term / np.linalg.norm(term)
        weights[(n_b, n_c)] = weights.get((n_b, n_c), 0.0) + abs(complex(amplitude)) ** 2

    norm = np.linalg.norm(state)
    if norm == 0.0:
        raise ValueError("coefficients cancel to the zero vector")

    total = sum(weights.values())
    prepared = {"b": {}, "c": {}}
    for (n_b, n_c), weight in weights.items():
        prepared["b"][n_b] = prepared["b"].get(n_b, 0.0) + weight / total
        prepared["c"][n_c] = prepared["c"].get(n_c, 0.0) + weight / total

    return sys.model_copy(update={"state": state / norm, "prepared": prepared, "steps": []})


def _single_atom_raman(pulse: PulseSpec) -> np.ndarray:
    h = pulse.delta_lambda * single_atom_sigma(3, 3)
    coupling = single_atom_sigma(3, 1) + single_atom_sigma(3, 2)
    return h + pulse.lambda_ * (coupling + coupling.conj().T)


def calibrate_swap(pulse: PulseSpec, target: float = FIDELITY_TARGET) -> Tuple[float, float]:
    """Shortest duration in [0.1, 10] x seed maximizing |<2|U(T)|1>|^2 for one atom.

    :returns: (duration, fidelity)
    :raises CalibrationFailure: if no duration reaches ``target``
    """
    energies, vectors = eigh(_single_atom_raman(pulse))
    # <2|U(T)|1> = sum_k <2|k> exp(-i E_k T) <k|1>
    weights = vectors[1, :] * vectors[0, :].conj()

    def fidelity(duration: float) -> float:
        return float(abs(np.sum(weights * np.exp(-1j * energies * duration))) ** 2)

    seed = pulse.seed_duration
    grid = np.linspace(CALIBRATION_WINDOW[0] * seed, CALIBRATION_WINDOW[1] * seed, CALIBRATION_GRID)
    values = np.abs(np.exp(-1j * np.outer(grid, energies)) @ weights) ** 2

    above = values >= target
    if not above.any():
        raise CalibrationFailure(
            f"best swap fidelity {values.max():.6f} below {target} for durations in "
            f"[{grid[0]:.4g}, {grid[-1]:.4g}] (seed {seed:.4g})"
        )

    # best point of the first lobe above target
    first = int(np.argmax(above))
    last = first
    while last + 1 < len(grid) and above[last + 1]:
        last += 1
    best = first + int(np.argmax(values[first : last + 1]))

    result = minimize_scalar(
        lambda t: -fidelity(t),
        bounds=(grid[max(best - 1, 0)], grid[min(best + 1, len(grid) - 1)]),
        method="bounded",
        options={"xatol": 1e-12 * seed},
    )
    duration, value = (float(result.x), -float(result.fun))
    if value < values[best]:
        duration, value = float(grid[best]), float(values[best])
    return duration, value


def raman_swap(sys: AtomCavityExact, pulse: PulseSpec, target: float = FIDELITY_TARGET) -> AtomCavityExact:
    """Exchange levels 1 and 2 of every atom under H = sum_j [dL s33 + L (s31 + s32 + h.c.)].

    The photon and level 4 are untouched. With ``pulse.calibrate`` the duration is optimized near
    the seed pi dL / L^2.

    :raises CalibrationFailure: if calibration cannot reach ``target``
    """
    seed = pulse.seed_duration
    if pulse.calibrate:
        duration, fidelity = calibrate_swap(pulse, target)
    else:
        duration = pulse.duration or seed
        fidelity = None

    single = expm(-1j * _single_atom_raman(pulse) * duration)
    if fidelity is None:
        fidelity = float(abs(single[1, 0]) ** 2)

    unitary = embed(tuple([single] * sys.n_atoms + [np.eye(sys.photon_cap + 1)]))
    step = ProtocolStep(name="raman_swap", duration=duration, fidelity=fidelity, seed_duration=seed)
    logger.debug(f"Raman swap: T={duration:.6g} (seed {seed:.6g}), fidelity={fidelity:.8f}")
    return sys.evolved(unitary @ sys.state, step)


def stirap_theta0(stirap: StirapSpec, params: PhysicalParams) -> float:
    """Initial control amplitude that makes the selected species the new dark state."""
    if not stirap.matched:
        return stirap.theta0_sign * stirap.omega

    g = math.sqrt(params.n_atoms) * params.g13
    g_new = math.sqrt(params.n_atoms) * params.g24
    if stirap.theta0_sign > 0:
        return stirap.omega * g_new / g
    if stirap.omega == 0.0:
        raise ValueError("c cannot be selected with Omega = 0")
    return -g * g_new / stirap.omega


def _stirap_hamiltonians(sys: AtomCavityExact, params: PhysicalParams) -> Tuple[np.ndarray, np.ndarray]:
    n, cap = sys.n_atoms, sys.photon_cap
    a = photon_op(n, cap)
    static = np.zeros((sys.dim, sys.dim), dtype=np.complex128)
    control = np.zeros_like(static)

    for j in range(n):
        static += params.delta * sigma(n, cap, j, 3, 3) + params.big_delta * sigma(n, cap, j, 4, 4)
        cavity_24 = sys.g24_per_atom * sigma(n, cap, j, 4, 2) @ a
        cavity_13 = sys.g13_per_atom * sigma(n, cap, j, 3, 1) @ a
        static += cavity_24 + cavity_24.conj().T + cavity_13 + cavity_13.conj().T
        control += sigma(n, cap, j, 4, 1) + sigma(n, cap, j, 1, 4)
    return static, control


def _ramp_evolve(
    state: np.ndarray,
    static: np.ndarray,
    control: np.ndarray,
    stirap: StirapSpec,
    theta0: float,
    n_steps: int,
) -> np.ndarray:
    dt = stirap.ramp_duration / n_steps
    midpoints = (np.arange(n_steps) + 0.5) / n_steps
    for theta in theta0 * stirap.ramp(midpoints):
        state = expm(-1j * (static + theta * control) * dt) @ state
    return state


def level_distribution(sys: AtomCavityExact, level: int) -> Distribution:
    """Distribution of the number of atoms in ``level``."""
    counts = level_count(sys.n_atoms, sys.photon_cap, level)
    return _distribution(np.abs(sys.state) ** 2, counts)


def classical_fidelity(p: Distribution, q: Distribution) -> float:
    """(sum_n sqrt(p_n q_n))^2."""
    keys = set(p) | set(q)
    return float(sum(math.sqrt(max(p.get(n, 0.0), 0.0) * max(q.get(n, 0.0), 0.0)) for n in keys) ** 2)


def stirap_map(
    sys: AtomCavityExact,
    stirap: StirapSpec,
    params: Optional[PhysicalParams] = None,
    step_tolerance: float = STEP_TOLERANCE,
) -> AtomCavityExact:
    """Ramp Theta from Theta0 to 0 with laser 1-4, cavity 2-4 (g24) and cavity 1-3 (g13) couplings.

    Piecewise-constant midpoint steps are doubled until successive final states agree to
    1 - |<psi_n|psi_2n>|^2 <= step_tolerance. The step fidelity compares the level-1 count
    distribution with the prepared statistics of the selected species.
    """
    params = params or sys.params
    theta0 = stirap_theta0(stirap, params)
    static, control = _stirap_hamiltonians(sys, params)

    with OperationTimer("stirap_map", structured_logger, n_atoms=sys.n_atoms, ramp=stirap.ramp_duration):
        n_steps = INITIAL_STEPS
        previous = _ramp_evolve(sys.state, static, control, stirap, theta0, n_steps)
        converged = False
        while n_steps < MAX_STEPS:
            n_steps *= 2
            current = _ramp_evolve(sys.state, static, control, stirap, theta0, n_steps)
            mismatch = 1.0 - abs(np.vdot(previous, current)) ** 2
            previous = current
            if mismatch <= step_tolerance:
                converged = True
                break

    if not converged:
        logger.warning(f"STIRAP stepping not converged at {n_steps} steps")

    mapped = sys.model_copy(update={"state": previous})
    extracted = level_distribution(mapped, 1)
    species_fidelity = {name: classical_fidelity(extracted, dist) for name, dist in sys.prepared.items()}
    selected = "b" if stirap.theta0_sign > 0 else "c"

    step = ProtocolStep(
        name="stirap",
        duration=stirap.ramp_duration,
        fidelity=species_fidelity.get(selected),
        n_steps=n_steps,
        converged=converged,
        species_fidelity=species_fidelity,
    )
    return sys.evolved(previous, step)


def species_statistics(sys: AtomCavityExact) -> Distribution:
    """Level-2 excitation-number distribution, the fluorescence observable after the full sequence."""
    return level_distribution(sys, 2)


def run_protocol(
    params: PhysicalParams,
    coeffs: Coefficients,
    species: Literal["b", "c"] = "b",
    pulse: Optional[PulseSpec] = None,
    ramp_duration: float = 1.0,
    ramp_shape: Literal["linear", "cosine"] = "cosine",
    matched: bool = True,
    n_atoms: Literal[1, 2] = 1,
    photon_cap: int = 3,
    fidelity_target: float = FIDELITY_TARGET,
    step_tolerance: float = STEP_TOLERANCE,
) -> ProtocolResult:
    """Prepare, swap, map by STIRAP, swap back and read out level 2.

    :param params: Parameters in force when the measurement starts
    :param coeffs: {(n_b, n_c): amplitude} of the prepared polariton state
    :param species: Species selected by the STIRAP sign
    """
    pulse = pulse or PulseSpec()
    stirap = StirapSpec(
        theta0_sign=1 if species == "b" else -1,
        ramp_shape=ramp_shape,
        ramp_duration=ramp_duration,
        omega=params.omega,
        matched=matched,
    )

    with OperationTimer("run_protocol", structured_logger, species=species, n_atoms=n_atoms):
        sys = prepare_polariton_state(make_system(params, n_atoms, photon_cap), coeffs)
        sys = raman_swap(sys, pulse, fidelity_target)
        sys = stirap_map(sys, stirap, params, step_tolerance)
        level1 = level_distribution(sys, 1)
        sys = raman_swap(sys, pulse, fidelity_target)

    swap, ramp = sys.steps[0], sys.steps[1]
    return ProtocolResult(
        species=species,
        statistics=species_statistics(sys),
        level1_before_final_pulse=level1,
        prepared=sys.prepared,
        seed_swap_duration=pulse.seed_duration,
        swap_duration=swap.duration,
        swap_fidelity=swap.fidelity,
        stirap_fidelity=ramp.fidelity,
        stirap_species_fidelity=ramp.species_fidelity,
        stirap_converged=ramp.converged,
        theta0=stirap_theta0(stirap, params),
        total_duration=sys.elapsed,
        final_norm=sys.norm(),
    )


def ideal_statistics(state: StateVector, spec: ModelSpec, site: int, species: Literal["b", "c"]) -> Distribution:
    """Exact spectral distribution of the species number at a site.

    The number operator has integer spectrum on the truncated space; eigenvalues are
    grouped by their nearest integer.
    """
    number = species_number_op(spec, species, site).to_dense()
    eigenvalues, vectors = eigh(number)
    rounded = np.rint(eigenvalues).astype(int)
    worst = float(np.max(np.abs(eigenvalues - rounded))) if eigenvalues.size else 0.0
    if worst > EIGENVALUE_TOLERANCE:
        logger.warning(f"n_{species} eigenvalues deviate from integers by {worst:.3e}")

    weights = np.abs(vectors.conj().T @ state.amplitudes) ** 2
    total = weights.sum()
    return _distribution(weights / total, rounded)
