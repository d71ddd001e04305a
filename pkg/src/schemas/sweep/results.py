from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator
from src.schemas.evolve.timeseries import TimeSeries
from src.schemas.params.physics import CrossoverWindow, EffectiveParams, ValidityReport


class SweepRow(BaseModel):
    """Effective parameters and validity flags at one Omega."""

    model_config = ConfigDict(frozen=True)

    omega_over_g13: float
    effective: Optional[EffectiveParams] = Field(None, description="None when the mapping is degenerate")
    mu_gap: Optional[float] = Field(None, description="|mu_c - mu_b|")
    validity_flags: Dict[str, bool] = Field(default_factory=dict)
    overall_pass: bool = False
    error: Optional[str] = Field(None, description="Failure message of a flagged row")

    @property
    def flagged(self) -> bool:
        return self.error is not None


class SweepResult(BaseModel):
    """Omega sweep of the parameter map."""

    model_config = ConfigDict(frozen=True)

    rows: List[SweepRow]
    crossover: Optional[CrossoverWindow] = None
    crossover_error: Optional[str] = None

    @field_validator("rows")
    @classmethod
    def check_grid(cls, rows: List[SweepRow]) -> List[SweepRow]:
        grid = [row.omega_over_g13 for row in rows]
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("omega grid must be strictly increasing")
        return rows

    @property
    def omega_over_g13(self) -> List[float]:
        return [row.omega_over_g13 for row in self.rows]

    def column(self, name: str) -> List[Optional[float]]:
        """Effective parameter column; None on flagged rows."""
        return [None if row.effective is None else getattr(row.effective, name) for row in self.rows]


class ComparisonResult(BaseModel):
    """Full versus effective dynamics of the same initial polariton placement."""

    model_config = ConfigDict(frozen=True)

    times: List[float]
    n_cavities: int
    full: TimeSeries
    effective: TimeSeries
    differences: Dict[str, List[float]] = Field(..., description="full minus effective per observable column")
    max_abs_diff: Dict[str, float]
    validity: ValidityReport
    full_charge_drift: float = Field(..., description="max |N_exc(t) - N_exc(0)| in the full model")
    effective_charge_drift: float = Field(..., description="max |N(t) - N(0)| in the effective model")

    @property
    def observable_names(self) -> List[str]:
        return list(self.differences)
