from typing import List, Literal, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from src.schemas.fock.models import ModeSpace
from src.schemas.params.physics import EffectiveParams, PhysicalParams

Species = Literal["b", "c", "p0", "p_plus", "p_minus"]
Placement = Tuple[str, int]

# Per-site mode layout of the full model: photon, collective 1-2, 1-3 and 1-4 excitations
FULL_MODES: Tuple[str, ...] = ("a", "s12", "s13", "s14")
FULL_WEIGHTS: Tuple[int, ...] = (1, 1, 1, 2)
EFFECTIVE_MODES: Tuple[str, ...] = ("b", "c")


class LatticeSpec(BaseModel):
    """Cavity array: sites and undirected nearest-neighbour edges."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n_sites: int = Field(..., ge=1, description="Number of cavities")
    edges: Tuple[Tuple[int, int], ...] = Field(default=(), description="Unordered site pairs")

    @field_validator("edges")
    @classmethod
    def canonical_edges(cls, edges: Tuple[Tuple[int, int], ...]) -> Tuple[Tuple[int, int], ...]:
        seen = set()
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-loop on site {i}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
        return tuple((min(i, j), max(i, j)) for i, j in edges)

    @model_validator(mode="after")
    def check_endpoints(self) -> "LatticeSpec":
        for i, j in self.edges:
            if i < 0 or j >= self.n_sites:
                raise ValueError(f"edge ({i}, {j}) outside 0..{self.n_sites - 1}")
        return self

    @classmethod
    def chain(cls, n_sites: int) -> "LatticeSpec":
        """Open 1D chain."""
        return cls(n_sites=n_sites, edges=tuple((i, i + 1) for i in range(n_sites - 1)))


class EffectiveModelSpec(BaseModel):
    """Two-component Bose-Hubbard model: modes (b, c) per site, mode index 2 * site + k."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    params: EffectiveParams
    lattice: LatticeSpec
    max_particles: int = Field(..., ge=0, description="Total boson cap K")
    include_two_photon_detuning: bool = Field(False, description="Add the two-photon detuning on-site term")
    include_pair_conversion: bool = Field(False, description="Add pair_conv (c+c+bb + b+b+cc)")

    @property
    def kind(self) -> str:
        return "effective"

    def mode_space(self) -> ModeSpace:
        return ModeSpace.uniform(2 * self.lattice.n_sites, self.max_particles)

    def mode(self, species: str, site: int) -> int:
        if species not in EFFECTIVE_MODES:
            raise ValueError(f"effective model has species b and c, got {species}")
        _check_site(site, self.lattice.n_sites)
        return 2 * site + EFFECTIVE_MODES.index(species)


class FullModelSpec(BaseModel):
    """Bosonized atom-cavity model: modes (a, s12, s13, s14) per site with weights (1, 1, 1, 2)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    params: PhysicalParams
    lattice: LatticeSpec
    max_excitations: int = Field(..., ge=0, description="Weighted excitation cap K")

    @property
    def kind(self) -> str:
        return "full"

    def mode_space(self) -> ModeSpace:
        n = self.lattice.n_sites
        return ModeSpace(n_modes=4 * n, weights=FULL_WEIGHTS * n, max_total=self.max_excitations)

    def mode(self, name: str, site: int) -> int:
        if name not in FULL_MODES:
            raise ValueError(f"full model modes are {FULL_MODES}, got {name}")
        _check_site(site, self.lattice.n_sites)
        return 4 * site + FULL_MODES.index(name)


ModelSpec = Union[EffectiveModelSpec, FullModelSpec]


def _check_site(site: int, n_sites: int) -> None:
    if not 0 <= site < n_sites:
        raise IndexError(f"site {site} outside 0..{n_sites - 1}")


class StateVector(BaseModel):
    """Complex amplitudes over the basis of a ModeSpace."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    space: ModeSpace
    amplitudes: np.ndarray

    @field_validator("amplitudes")
    @classmethod
    def check_amplitudes(cls, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.complex128)
        if v.ndim != 1:
            raise ValueError("amplitudes must be a 1-D vector")
        if not np.all(np.isfinite(v)):
            raise ValueError("amplitudes must be finite")
        return v

    @property
    def dim(self) -> int:
        return int(self.amplitudes.shape[0])

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        norm = self.norm()
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(space=self.space, amplitudes=self.amplitudes / norm)

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "StateVector") -> float:
        return abs(self.overlap(other)) ** 2


def placements_from_strings(items: List[str]) -> List[Placement]:
    """Parse 'species@cavity' items with 1-based cavity numbers, e.g. 'b@1'."""
    placements = []
    for item in items:
        species, sep, cavity = item.strip().partition("@")
        if not sep or not cavity.strip().isdigit():
            raise ValueError(f"placement must look like 'b@1', got {item!r}")
        placements.append((species.strip(), int(cavity) - 1))
    return placements
