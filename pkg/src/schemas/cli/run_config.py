import hashlib
import json
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from src.config import Settings, get_settings
from src.exceptions import ConfigurationError
from src.schemas.evolve.timeseries import PropagatorConfig
from src.schemas.models.specs import LatticeSpec, Placement, placements_from_strings
from src.schemas.params.physics import PhysicalParams, TunnelingConvention

NONE_LITERALS = {"", "none", "null"}


def _split_items(value: Any) -> Any:
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


def _optional(value: Any) -> Any:
    if isinstance(value, str) and value.strip().lower() in NONE_LITERALS:
        return None
    return value


class _Section(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)


class LatticeSection(_Section):
    n_sites: int = Field(3, ge=1)
    edges: Optional[List[Tuple[int, int]]] = Field(None, description="'1-2,2-3' with 1-based cavities; None = open chain")

    @field_validator("edges", mode="before")
    @classmethod
    def parse_edges(cls, value: Any) -> Any:
        value = _optional(value)
        if not isinstance(value, str):
            return value
        edges = []
        for item in _split_items(value):
            left, sep, right = item.partition("-")
            if not sep or not left.strip().isdigit() or not right.strip().isdigit():
                raise ValueError(f"edge must look like '1-2', got {item!r}")
            edges.append((int(left) - 1, int(right) - 1))
        return edges

    def to_spec(self) -> LatticeSpec:
        if self.edges is None:
            return LatticeSpec.chain(self.n_sites)
        return LatticeSpec(n_sites=self.n_sites, edges=tuple(self.edges))


class SweepSection(_Section):
    omega_min: float = Field(10.0, gt=0.0)
    omega_max: float = Field(1000.0, gt=0.0)
    n_points: int = Field(200, ge=1)
    log_spaced: bool = True

    @model_validator(mode="after")
    def check_range(self) -> "SweepSection":
        if self.n_points > 1 and self.omega_max <= self.omega_min:
            raise ValueError("sweep.omega_max must exceed sweep.omega_min")
        return self


class EvolveSection(_Section):
    model: Literal["full", "effective"] = "full"
    t_max: float = Field(600.0, ge=0.0)
    n_samples: int = Field(600, ge=1)
    placements: List[str] = Field(default_factory=lambda: ["b@1", "b@2", "c@3"])
    tunneling: TunnelingConvention = "photon_weight"
    include_two_photon_detuning: bool = True

    @field_validator("placements", mode="before")
    @classmethod
    def split_placements(cls, v: Any) -> Any:
        return _split_items(v)

    @field_validator("placements")
    @classmethod
    def check_placements(cls, v: List[str]) -> List[str]:
        if not v:
            raise ValueError("evolve.placements must name at least one polariton")
        placements_from_strings(v)
        return v

    def placement_pairs(self) -> List[Placement]:
        return placements_from_strings(self.placements)


class ValiditySection(_Section):
    threshold: float = Field(0.1, gt=0.0, lt=1.0)


class OptimizeSection(_Section):
    big_delta_min: float = -1.0e4
    big_delta_max: float = -1.0e-2
    n_grid: int = Field(401, ge=3)

    @model_validator(mode="after")
    def check_bounds(self) -> "OptimizeSection":
        if self.big_delta_max <= self.big_delta_min:
            raise ValueError("optimize.big_delta_max must exceed optimize.big_delta_min")
        return self


class CrossoverSection(_Section):
    omega_low: Optional[float] = Field(None, gt=0.0, description="Bracket of the Omega scan; None = automatic")
    omega_high: Optional[float] = Field(None, gt=0.0)

    @field_validator("omega_low", "omega_high", mode="before")
    @classmethod
    def parse_none(cls, v: Any) -> Any:
        return _optional(v)

    @model_validator(mode="after")
    def check_bracket(self) -> "CrossoverSection":
        if (self.omega_low is None) != (self.omega_high is None):
            raise ValueError("crossover.omega_low and crossover.omega_high must be given together")
        if self.omega_low is not None and self.omega_high <= self.omega_low:
            raise ValueError("crossover.omega_high must exceed crossover.omega_low")
        return self

    @property
    def bracket(self) -> Optional[Tuple[float, float]]:
        if self.omega_low is None:
            return None
        return self.omega_low, self.omega_high


class MeasureSection(_Section):
    species: Literal["b", "c"] = "b"
    n_b: int = Field(1, ge=0, description="Excitations of the prepared b component")
    n_c: int = Field(0, ge=0, description="Excitations of the prepared c component")
    superpose_vacuum: bool = Field(False, description="Prepare (|vac> + |n_b, n_c>) / sqrt(2)")
    n_atoms: int = Field(1, ge=1, le=2, description="Atoms simulated exactly")
    photon_cap: int = Field(3, ge=1)
    raman_lambda: float = Field(1000.0, gt=0.0)
    raman_delta: float = 1.0e5
    ramp_duration: float = Field(1.0, gt=0.0)
    ramp_shape: Literal["linear", "cosine"] = "cosine"
    matched: bool = True
    fidelity_target: float = Field(0.999, gt=0.0, le=1.0)
    step_tolerance: float = Field(1e-8, gt=0.0)

    def coefficients(self) -> Dict[Tuple[int, int], complex]:
        if self.superpose_vacuum and (self.n_b, self.n_c) != (0, 0):
            return {(0, 0): 1.0, (self.n_b, self.n_c): 1.0}
        return {(self.n_b, self.n_c): 1.0}


SECTIONS: Tuple[str, ...] = (
    "params",
    "lattice",
    "sweep",
    "evolve",
    "propagator",
    "validity",
    "optimize",
    "crossover",
    "measure",
)


class RunConfig(_Section):
    """Resolved inputs of one CLI run; energies in units of g13, times in 1/g13."""

    params: PhysicalParams = Field(default_factory=PhysicalParams)
    lattice: LatticeSection = Field(default_factory=LatticeSection)
    sweep: SweepSection = Field(default_factory=SweepSection)
    evolve: EvolveSection = Field(default_factory=EvolveSection)
    propagator: PropagatorConfig = Field(default_factory=PropagatorConfig)
    validity: ValiditySection = Field(default_factory=ValiditySection)
    optimize: OptimizeSection = Field(default_factory=OptimizeSection)
    crossover: CrossoverSection = Field(default_factory=CrossoverSection)
    measure: MeasureSection = Field(default_factory=MeasureSection)

    @model_validator(mode="after")
    def check_placements_fit_lattice(self) -> "RunConfig":
        for species, site in self.evolve.placement_pairs():
            if species not in ("b", "c"):
                raise ValueError(f"evolve.placements species must be b or c, got {species!r}")
            if not 0 <= site < self.lattice.n_sites:
                raise ValueError(f"evolve.placements cavity {site + 1} is outside 1..{self.lattice.n_sites}")
        return self

    @classmethod
    def defaults(cls, settings: Optional[Settings] = None) -> Dict[str, Dict[str, Any]]:
        """Section defaults, with the SWEEP__, PROPAGATOR__, VALIDITY__ and MEASURE__ settings applied."""
        if settings is None:
            settings = get_settings()

        measure = settings.measure
        return {
            "sweep": {
                "omega_min": settings.sweep.omega_min,
                "omega_max": settings.sweep.omega_max,
                "n_points": settings.sweep.n_points,
                "log_spaced": settings.sweep.log_spaced,
            },
            "evolve": {"t_max": settings.sweep.t_max, "n_samples": settings.sweep.n_samples},
            "propagator": settings.propagator.model_dump(),
            "validity": {"threshold": settings.validity.threshold},
            "measure": {
                "n_atoms": measure.n_atoms,
                "photon_cap": measure.photon_cap,
                "raman_lambda": measure.raman_lambda,
                "raman_delta": measure.raman_delta,
                "ramp_duration": measure.ramp_duration,
                "ramp_shape": measure.ramp_shape,
                "fidelity_target": measure.fidelity_target,
                "step_tolerance": measure.step_tolerance,
            },
        }

    @classmethod
    def from_text(cls, text: str, settings: Optional[Settings] = None) -> "RunConfig":
        """Parse ``section.key = value`` lines over the defaults.

        :param text: Config file contents; '#' starts a comment
        :param settings: Settings supplying defaults
        :returns: Validated RunConfig
        :raises ConfigurationError: on malformed lines, unknown sections or repeated keys
        :raises pydantic.ValidationError: on unknown keys or invalid values
        """
        values = cls.defaults(settings)
        seen = set()
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            section, dot, field = key.strip().partition(".")
            if not sep or not dot or not field:
                raise ConfigurationError(f"line {number}: expected 'section.key = value', got {raw.strip()!r}")
            if section not in SECTIONS:
                raise ConfigurationError(f"line {number}: unknown section {section!r}")
            if (section, field) in seen:
                raise ConfigurationError(f"line {number}: {section}.{field} given twice")
            seen.add((section, field))
            values.setdefault(section, {})[field.strip()] = value.strip()
        return cls.model_validate(values)

    def to_text(self) -> str:
        """Resolved config with every default filled, one ``section.key = value`` per line."""
        lines = []
        for section in SECTIONS:
            for field, value in getattr(self, section).model_dump(mode="json", by_alias=True).items():
                lines.append(f"{section}.{field} = {_format_value(value)}")
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        payload = json.dumps(self.model_dump(mode="json", by_alias=True), sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()


def _format_value(value: Any) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list):
        if value and isinstance(value[0], list):
            return ",".join(f"{i + 1}-{j + 1}" for i, j in value)
        return ",".join(str(item) for item in value)
    return str(value)
