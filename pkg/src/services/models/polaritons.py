"""Polariton creation operators and initial-state preparation."""

import logging
import math
from functools import lru_cache
from typing import Sequence

import numpy as np
from src.exceptions import TruncationExceeded
from src.schemas.models.specs import EffectiveModelSpec, FullModelSpec, ModelSpec, Placement, StateVector
from src.services.fock.operators import SparseOperator, ladder, number_op
from src.services.fock.space import get_basis
from src.services.params.mapping import derive_scales

logger = logging.getLogger(__name__)

POLARITON_SPECIES = ("b", "c", "p0", "p_plus", "p_minus")


@lru_cache(maxsize=256)
def polariton_creation(spec: FullModelSpec, species: str, site: int) -> SparseOperator:
    """Creation operator of one polariton species at a site of the full model.

    b+ = p0+ = (g s12+ - Omega a+)/B, c+ = (Omega s12+ + g a+)/B,
    p+-+ = sqrt(2/(A(A +- delta))) (Omega s12+ + g a+ +- (A +- delta)/2 s13+).
    """
    if species not in POLARITON_SPECIES:
        raise ValueError(f"species must be one of {POLARITON_SPECIES}, got {species}")

    space = spec.mode_space()
    a_dag = ladder(space, spec.mode("a", site), "raise")
    s12_dag = ladder(space, spec.mode("s12", site), "raise")
    s13_dag = ladder(space, spec.mode("s13", site), "raise")

    scales = derive_scales(spec.params)
    g, omega, b_scale, a_scale = scales.g, spec.params.omega, scales.b_scale, scales.a_scale
    delta = spec.params.delta

    if species in ("b", "p0"):
        return (s12_dag * g - a_dag * omega) * (1.0 / b_scale)
    if species == "c":
        return (s12_dag * omega + a_dag * g) * (1.0 / b_scale)

    sign = 1.0 if species == "p_plus" else -1.0
    shifted = a_scale + sign * delta
    bright = s12_dag * omega + a_dag * g + s13_dag * (sign * shifted / 2.0)
    return bright * math.sqrt(2.0 / (a_scale * shifted))


def _creation(spec: ModelSpec, species: str, site: int) -> SparseOperator:
    if isinstance(spec, EffectiveModelSpec):
        return ladder(spec.mode_space(), spec.mode(species, site), "raise")
    return polariton_creation(spec, species, site)


def _cap(spec: ModelSpec) -> int:
    return spec.max_particles if isinstance(spec, EffectiveModelSpec) else spec.max_excitations


def vacuum(spec: ModelSpec) -> StateVector:
    space = spec.mode_space()
    amplitudes = np.zeros(get_basis(space).dim, dtype=np.complex128)
    amplitudes[0] = 1.0
    return StateVector(space=space, amplitudes=amplitudes)


def prepare_state(spec: ModelSpec, placements: Sequence[Placement]) -> StateVector:
    """Normalized product of creation operators applied to the vacuum.

    :param spec: Effective or full model
    :param placements: (species, site) pairs, sites 0-based
    :raises TruncationExceeded: if the placements need more excitations than the cap
    """
    if len(placements) > _cap(spec):
        raise TruncationExceeded(f"{len(placements)} polaritons requested, the model keeps at most {_cap(spec)} excitations")

    state = vacuum(spec).amplitudes
    for species, site in placements:
        state = _creation(spec, species, site).apply(state)

    norm = np.linalg.norm(state)
    if norm == 0.0:
        raise TruncationExceeded(f"placements {list(placements)} vanish in the truncated space")
    return StateVector(space=spec.mode_space(), amplitudes=state / norm)


@lru_cache(maxsize=256)
def _full_species_number(spec: FullModelSpec, species: str, site: int) -> SparseOperator:
    creation = polariton_creation(spec, species, site)
    return creation @ creation.adjoint()


def species_number_op(spec: ModelSpec, species: str, site: int) -> SparseOperator:
    """n_species = s+ s at a site; the plain mode number in the effective model."""
    if species not in ("b", "c"):
        raise ValueError(f"species must be b or c, got {species}")
    if isinstance(spec, EffectiveModelSpec):
        return number_op(spec.mode_space(), spec.mode(species, site))
    return _full_species_number(spec, species, site)
