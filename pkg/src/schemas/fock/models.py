from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

# Occupation vector (n_1, ..., n_M)
BasisState = Tuple[int, ...]


class ModeSpace(BaseModel):
    """Multi-mode bosonic space truncated by a weighted total excitation number.

    A state n is admissible iff sum_m weights[m] * n[m] <= max_total and n[m] <= per_mode_cap[m].
    Basis order is lexicographic on the occupation vector, first mode most significant.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    n_modes: int = Field(..., ge=1, description="Number of bosonic modes")
    weights: Tuple[int, ...] = Field(..., description="Per-mode positive excitation weight")
    max_total: int = Field(..., ge=0, description="Weighted total excitation cap K")
    per_mode_cap: Optional[Tuple[int, ...]] = Field(None, description="Optional per-mode occupation caps")

    @model_validator(mode="after")
    def check_lengths(self) -> "ModeSpace":
        if len(self.weights) != self.n_modes:
            raise ValueError(f"weights has {len(self.weights)} entries for {self.n_modes} modes")
        if any(w < 1 for w in self.weights):
            raise ValueError("mode weights must be positive integers")
        if self.per_mode_cap is not None:
            if len(self.per_mode_cap) != self.n_modes:
                raise ValueError(f"per_mode_cap has {len(self.per_mode_cap)} entries for {self.n_modes} modes")
            if any(c < 0 for c in self.per_mode_cap):
                raise ValueError("per-mode caps must be non-negative")
        return self

    @classmethod
    def uniform(cls, n_modes: int, max_total: int) -> "ModeSpace":
        """All modes with weight 1."""
        return cls(n_modes=n_modes, weights=(1,) * n_modes, max_total=max_total)

    def mode_limit(self, mode: int) -> int:
        """Largest occupation mode can reach on its own."""
        limit = self.max_total // self.weights[mode]
        if self.per_mode_cap is not None:
            limit = min(limit, self.per_mode_cap[mode])
        return limit

    def weighted_total(self, state: BasisState) -> int:
        return sum(w * n for w, n in zip(self.weights, state))

    def is_admissible(self, state: BasisState) -> bool:
        if len(state) != self.n_modes or any(n < 0 for n in state):
            return False
        if self.per_mode_cap is not None and any(n > c for n, c in zip(state, self.per_mode_cap)):
            return False
        return self.weighted_total(state) <= self.max_total
