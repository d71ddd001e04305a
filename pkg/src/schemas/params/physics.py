import math
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

TunnelingConvention = Literal["atomic_weight", "photon_weight"]


class PhysicalParams(BaseModel):
    """Microscopic atom-cavity parameters.

    Every energy and rate is in units of g13 (hbar = 1), times in 1/g13.
    Defaults reproduce the three-cavity dynamics setup (N = 1000, Omega = 1.5 sqrt(N)).
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    g13: float = Field(1.0, gt=0.0, description="Dipole coupling 1-3 (unit energy)")
    g24: float = Field(1.0, description="Dipole coupling 2-4")
    n_atoms: int = Field(1000, ge=1, description="Atoms per cavity N")
    delta: float = Field(1.0e4, description="Detuning of level 3")
    big_delta: float = Field(-46.0, description="Detuning of level 4 (may be negative)")
    epsilon: float = Field(0.0, description="Two-photon detuning")
    omega: float = Field(1.5 * math.sqrt(1000.0), ge=0.0, description="Laser Rabi frequency")
    alpha: float = Field(-2.2e-3, description="Photon tunneling rate (may be negative)")
    kappa: float = Field(0.0, ge=0.0, description="Cavity decay rate")
    gamma3: float = Field(0.0, ge=0.0, description="Spontaneous emission rate of level 3")
    gamma4: float = Field(0.0, ge=0.0, description="Spontaneous emission rate of level 4")

    def replace(self, **changes: float) -> "PhysicalParams":
        """Return a validated copy with some fields changed."""
        return PhysicalParams(**{**self.model_dump(), **changes})


class DerivedScales(BaseModel):
    """Collective coupling, mixing scales and polariton frequencies."""

    model_config = ConfigDict(frozen=True)

    g: float
    b_scale: float
    a_scale: float
    mu_0: float = 0.0
    mu_plus: float
    mu_minus: float
    mu_plus_approx: float
    mu_minus_approx: float

    @property
    def b_sq(self) -> float:
        return self.b_scale**2


class EffectiveParams(BaseModel):
    """Coefficients of the two-component Bose-Hubbard Hamiltonian."""

    model_config = ConfigDict(frozen=True)

    mu_b: float
    mu_c: float
    u_b: float
    u_c: float
    u_bc: float
    j_bb: float
    j_cc: float
    j_bc: float
    eps_b: float = 0.0
    eps_c: float = 0.0
    eps_bc: float = 0.0
    pair_conv: float = 0.0
    pair_conv_active: bool = False
    tunneling: TunnelingConvention = "atomic_weight"

    @classmethod
    def hubbard(
        cls,
        mu_b: float = 0.0,
        mu_c: float = 0.0,
        u_b: float = 0.0,
        u_c: float = 0.0,
        u_bc: float = 0.0,
        j_bb: float = 0.0,
        j_cc: float = 0.0,
        j_bc: float = 0.0,
        **extra: float,
    ) -> "EffectiveParams":
        """Build coefficients directly, without a microscopic parameter set."""
        return cls(mu_b=mu_b, mu_c=mu_c, u_b=u_b, u_c=u_c, u_bc=u_bc, j_bb=j_bb, j_cc=j_cc, j_bc=j_bc, **extra)

    @property
    def mu_gap(self) -> float:
        return abs(self.mu_c - self.mu_b)


class DecayRates(BaseModel):
    """Occupation-gated decay rates of the two polariton species.

    The level-4 channel only opens at double occupancy (Heaviside gate on n - 2).
    """

    model_config = ConfigDict(frozen=True)

    b_photonic: float = Field(..., ge=0.0)
    c_photonic: float = Field(..., ge=0.0)
    c_level3: float = Field(..., ge=0.0)
    level4: float = Field(..., ge=0.0)

    @staticmethod
    def gate(n: int) -> float:
        return 1.0 if n - 2 >= 0 else 0.0

    def gamma_b(self, n_b: int) -> float:
        return self.b_photonic + self.gate(n_b) * self.level4

    def gamma_c(self, n_c: int) -> float:
        return self.c_photonic + self.c_level3 + self.gate(n_c) * self.level4

    def components(self, n_b: int, n_c: int) -> Dict[str, Dict[str, float]]:
        return {
            "b": {"photonic": self.b_photonic, "level3": 0.0, "level4": self.gate(n_b) * self.level4},
            "c": {"photonic": self.c_photonic, "level3": self.c_level3, "level4": self.gate(n_c) * self.level4},
        }


class ValidityCondition(BaseModel):
    """One 'lhs much less than rhs' condition."""

    model_config = ConfigDict(frozen=True)

    name: str
    lhs: float
    rhs: float
    ratio: float
    passed: bool = Field(..., serialization_alias="pass")


class ValidityReport(BaseModel):
    """Outcome of every approximation inequality for one parameter set."""

    model_config = ConfigDict(frozen=True)

    conditions: List[ValidityCondition]
    overall_pass: bool
    threshold: float

    def condition(self, name: str) -> ValidityCondition:
        for cond in self.conditions:
            if cond.name == name:
                return cond
        raise KeyError(name)

    @property
    def failed(self) -> List[str]:
        return [cond.name for cond in self.conditions if not cond.passed]

    def flags(self) -> Dict[str, bool]:
        return {cond.name: cond.passed for cond in self.conditions}


RatioObjective = Literal[
    "u_b_over_gamma_b",
    "u_c_over_gamma_c",
    "u_bc_over_max_gamma",
    "u_b_over_gamma_b_single_component",
]


class RatioOptimum(BaseModel):
    """Best interaction-to-decay ratio over the level-4 detuning."""

    model_config = ConfigDict(frozen=True)

    objective: RatioObjective
    best_big_delta: float
    best_ratio: float
    zeta: Optional[float] = Field(None, description="Cooperativity g13/sqrt(kappa gamma4)")
    ratio_over_zeta: Optional[float] = None


class CrossoverWindow(BaseModel):
    """Omega interval where b/c conversion by tunneling is resonant."""

    model_config = ConfigDict(frozen=True)

    omega_low: float
    omega_high: float
    x_low: float = Field(..., description="omega_low / g")
    x_high: float = Field(..., description="omega_high / g")
