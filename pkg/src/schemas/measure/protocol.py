import math
from typing import Dict, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator
from src.schemas.params.physics import PhysicalParams

Distribution = Dict[int, float]


class PulseSpec(BaseModel):
    """Raman pulse swapping levels 1 and 2 through the far-detuned level 3."""

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    lambda_: float = Field(1000.0, alias="lambda", gt=0.0, description="Raman Rabi frequency")
    delta_lambda: float = Field(1.0e5, description="Detuning from level 3")
    duration: Optional[float] = Field(None, gt=0.0, description="Pulse time; None uses the analytic seed")
    calibrate: bool = Field(True, description="Optimize the duration around the seed")

    @field_validator("delta_lambda")
    @classmethod
    def check_detuning(cls, v: float) -> float:
        if v == 0.0:
            raise ValueError("delta_lambda must be non-zero")
        return v

    @property
    def seed_duration(self) -> float:
        """T = pi delta_Lambda / |Lambda|^2."""
        return math.pi * abs(self.delta_lambda) / self.lambda_**2


class StirapSpec(BaseModel):
    """Adiabatic switch-off of the 1-4 control field Theta."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    theta0_sign: Literal[1, -1] = Field(1, description="+1 maps b, -1 maps c")
    ramp_shape: Literal["linear", "cosine"] = "cosine"
    ramp_duration: float = Field(1.0, gt=0.0)
    omega: float = Field(..., ge=0.0, description="Omega in force before the switch-off")
    matched: bool = Field(True, description="Choose Theta0 so the selected species is exactly the new dark state")

    def ramp(self, s: np.ndarray) -> np.ndarray:
        """Monotone envelope on s = t / ramp_duration, 1 at s = 0 and 0 at s = 1."""
        s = np.clip(s, 0.0, 1.0)
        if self.ramp_shape == "linear":
            return 1.0 - s
        return 0.5 * (1.0 + np.cos(np.pi * s))


class ProtocolStep(BaseModel):
    """Bookkeeping of one applied protocol stage."""

    model_config = ConfigDict(frozen=True)

    name: str
    duration: float
    fidelity: Optional[float] = None
    seed_duration: Optional[float] = None
    n_steps: Optional[int] = None
    converged: bool = True
    species_fidelity: Dict[str, float] = Field(default_factory=dict)


class AtomCavityExact(BaseModel):
    """Few four-level atoms in one cavity: state over (atom)^n_atoms (x) photon Fock space.

    Levels 1..4 are stored as indices 0..3; the photon factor is last in the tensor order.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    params: PhysicalParams
    n_atoms: Literal[1, 2] = 1
    photon_cap: int = Field(3, ge=1)
    state: np.ndarray
    prepared: Dict[str, Distribution] = Field(default_factory=dict, description="Input b and c statistics")
    steps: List[ProtocolStep] = Field(default_factory=list)

    @property
    def dim(self) -> int:
        return 4**self.n_atoms * (self.photon_cap + 1)

    @property
    def elapsed(self) -> float:
        return sum(step.duration for step in self.steps)

    @property
    def g13_per_atom(self) -> float:
        """Per-atom coupling preserving the collective sqrt(N) g13 of the physical ensemble."""
        return self.params.g13 * math.sqrt(self.params.n_atoms / self.n_atoms)

    @property
    def g24_per_atom(self) -> float:
        return self.params.g24 * math.sqrt(self.params.n_atoms / self.n_atoms)

    def norm(self) -> float:
        return float(np.linalg.norm(self.state))

    def evolved(self, state: np.ndarray, step: ProtocolStep) -> "AtomCavityExact":
        return self.model_copy(update={"state": state, "steps": [*self.steps, step]})


class ProtocolResult(BaseModel):
    """Outcome of swap, STIRAP and final swap on one prepared state."""

    model_config = ConfigDict(frozen=True)

    species: Literal["b", "c"]
    statistics: Distribution = Field(..., description="Level-2 excitation-number distribution")
    level1_before_final_pulse: Distribution
    prepared: Dict[str, Distribution]
    seed_swap_duration: float
    swap_duration: float
    swap_fidelity: float
    stirap_fidelity: float
    stirap_species_fidelity: Dict[str, float]
    stirap_converged: bool
    theta0: float
    total_duration: float
    final_norm: float
