"""Unitary time evolution exp(-iHt) psi with dense and Lanczos backends."""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import eigh, eigh_tridiagonal
from src.exceptions import ConvergenceFailure, DimMismatch, NonHermitian
from src.schemas.evolve.timeseries import PropagatorConfig, TimeSeries
from src.schemas.models.specs import StateVector
from src.services.fock.operators import SparseOperator
from src.utils.logging import OperationTimer, StructuredLogger

logger = logging.getLogger(__name__)
structured_logger = StructuredLogger(__name__)

NORM_TOLERANCE = 1e-8
MAX_HALVINGS = 40

Observable = Tuple[str, SparseOperator]


def check_hermitian(hamiltonian: SparseOperator, tolerance: float) -> None:
    """:raises NonHermitian: if max |H - H^dagger| exceeds tolerance * max(1, max |H_ij|)"""
    error = hamiltonian.hermiticity_error()
    scale = max(1.0, hamiltonian.max_abs())
    if error > tolerance * scale:
        raise NonHermitian(f"max |H - H^dagger| = {error:.3e} exceeds {tolerance:.1e} x {scale:.3e}")


class DensePropagator:
    """Exact propagation from one eigendecomposition of H."""

    def __init__(self, hamiltonian: SparseOperator):
        self.energies, self.vectors = eigh(hamiltonian.to_dense())

    def evolve(self, psi: np.ndarray, t: float) -> np.ndarray:
        coefficients = self.vectors.conj().T @ psi
        return self.vectors @ (np.exp(-1j * self.energies * t) * coefficients)


class KrylovPropagator:
    """Lanczos propagation with step halving on the local error estimate.

    The estimate is beta_m |[exp(-i T_m dt)]_{m,1}| for the m-step tridiagonal matrix T_m.
    """

    def __init__(
        self,
        hamiltonian: SparseOperator,
        krylov_dim: int,
        tolerance: float,
        time_step: float,
        max_halvings: int = MAX_HALVINGS,
    ):
        self.matrix = hamiltonian.matrix
        self.scale = max(1.0, hamiltonian.max_abs())
        self.max_halvings = max_halvings
        self.krylov_dim = min(krylov_dim, hamiltonian.dim)
        self.tolerance = tolerance
        self.time_step = time_step
        self._step = time_step

    def _lanczos(self, psi: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, float]:
        dim = psi.shape[0]
        basis = np.zeros((self.krylov_dim, dim), dtype=np.complex128)
        alphas: List[float] = []
        betas: List[float] = []

        basis[0] = psi / np.linalg.norm(psi)
        residual_norm = 0.0

        for j in range(self.krylov_dim):
            w = self.matrix @ basis[j]
            alpha = float(np.real(np.vdot(basis[j], w)))
            alphas.append(alpha)
            w = w - alpha * basis[j]
            if j > 0:
                w = w - betas[j - 1] * basis[j - 1]
            # full reorthogonalization
            w = w - basis[: j + 1].T @ (basis[: j + 1].conj() @ w)

            residual_norm = float(np.linalg.norm(w))
            if residual_norm < 1e-14 * self.scale:
                # invariant subspace: the projection is exact
                return np.array(alphas), np.array(betas), basis[: j + 1], 0.0
            if j + 1 < self.krylov_dim:
                betas.append(residual_norm)
                basis[j + 1] = w / residual_norm

        return np.array(alphas), np.array(betas), basis, residual_norm

    def _try_step(self, psi: np.ndarray, dt: float) -> Tuple[np.ndarray, float]:
        norm = np.linalg.norm(psi)
        alphas, betas, basis, residual = self._lanczos(psi)
        if len(alphas) == 1:
            return np.exp(-1j * alphas[0] * dt) * psi, 0.0

        theta, s = eigh_tridiagonal(alphas, betas)
        small = s @ (np.exp(-1j * theta * dt) * s[0].conj())
        error = residual * abs(small[-1]) * norm
        return norm * (basis.T @ small), error

    def evolve(self, psi: np.ndarray, t: float) -> np.ndarray:
        elapsed = 0.0
        halvings = 0
        while elapsed < t:
            dt = min(self._step, t - elapsed)
            candidate, error = self._try_step(psi, dt)
            if error > self.tolerance:
                halvings += 1
                if halvings > self.max_halvings:
                    raise ConvergenceFailure(
                        f"Lanczos error {error:.3e} above tolerance {self.tolerance:.1e} at step {dt:.3e} "
                        f"with krylov_dim={self.krylov_dim}"
                    )
                self._step = dt / 2.0
                continue
            psi = candidate
            elapsed += dt
            halvings = 0
            self._step = min(2.0 * self._step, self.time_step)
        return psi


def make_backend(hamiltonian: SparseOperator, config: PropagatorConfig):
    check_hermitian(hamiltonian, config.hermiticity_tolerance)
    if config.method == "dense":
        return DensePropagator(hamiltonian)
    return KrylovPropagator(hamiltonian, config.krylov_dim, config.tolerance, config.time_step)


def _check_inputs(hamiltonian: SparseOperator, psi0: StateVector, observables: Sequence[Observable]) -> None:
    if psi0.dim != hamiltonian.dim:
        raise DimMismatch(f"state of length {psi0.dim} for Hamiltonian of dim {hamiltonian.dim}")
    for name, op in observables:
        if op.dim != hamiltonian.dim:
            raise DimMismatch(f"observable {name} has dim {op.dim}, Hamiltonian has {hamiltonian.dim}")
    if abs(psi0.norm() - 1.0) > NORM_TOLERANCE:
        raise ValueError(f"initial state must be normalized, norm = {psi0.norm():.12f}")


def evolve(
    hamiltonian: SparseOperator,
    psi0: StateVector,
    times: Sequence[float],
    observables: Sequence[Observable],
    config: Optional[PropagatorConfig] = None,
) -> TimeSeries:
    """Sample <psi(t)|O|psi(t)> with psi(t) = exp(-iHt) psi0.

    Every record also carries the state norm under ``norm``.

    :param hamiltonian: Hermitian Hamiltonian
    :param psi0: Normalized initial state
    :param times: Increasing sample times, t >= 0
    :param observables: (name, operator) pairs
    :param config: Propagator settings, defaults to the dense backend
    :raises NonHermitian: if H fails the Hermiticity precheck
    :raises ConvergenceFailure: if the Krylov error estimate cannot meet the tolerance
    """
    config = config or PropagatorConfig()
    _check_inputs(hamiltonian, psi0, observables)
    times = [float(t) for t in times]
    if times and times[0] < 0.0:
        raise ValueError("sample times must be non-negative")

    with OperationTimer("evolve", structured_logger, method=config.method, dim=hamiltonian.dim, n_times=len(times)):
        backend = make_backend(hamiltonian, config)
        records: List[Dict[str, float]] = []
        psi, current = psi0.amplitudes, 0.0

        for t in times:
            if config.method == "dense":
                psi = backend.evolve(psi0.amplitudes, t)
            else:
                psi = backend.evolve(psi, t - current)
            current = t

            record = {name: float(np.real(op.expectation(psi))) for name, op in observables}
            record["norm"] = float(np.linalg.norm(psi))
            records.append(record)

    if records and abs(records[-1]["norm"] - 1.0) > NORM_TOLERANCE:
        logger.warning(f"Norm drifted to {records[-1]['norm']:.12f} over the trajectory")
    return TimeSeries(times=times, records=records)


def propagate(
    hamiltonian: SparseOperator,
    psi0: StateVector,
    t: float,
    config: Optional[PropagatorConfig] = None,
) -> StateVector:
    """State exp(-iHt) psi0 at a single time."""
    config = config or PropagatorConfig()
    _check_inputs(hamiltonian, psi0, [])
    if t < 0.0:
        raise ValueError("t must be non-negative")

    backend = make_backend(hamiltonian, config)
    return StateVector(space=psi0.space, amplitudes=backend.evolve(psi0.amplitudes, float(t)))
