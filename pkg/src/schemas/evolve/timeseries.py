import math
from typing import Dict, List, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class PropagatorConfig(BaseModel):
    """Backend choice and accuracy controls for time evolution (times in 1/g13)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    method: Literal["dense", "krylov"] = Field("dense", description="Eigendecomposition or Lanczos propagation")
    time_step: float = Field(1.0, gt=0.0, description="Largest Krylov sub-step")
    krylov_dim: int = Field(30, ge=2, description="Lanczos subspace dimension")
    tolerance: float = Field(1e-10, gt=0.0, description="Target local error per step")
    hermiticity_tolerance: float = Field(1e-12, gt=0.0, description="Allowed |H - H^dagger| relative to max |H_ij|")


class TimeSeries(BaseModel):
    """Observable expectation values sampled along one trajectory."""

    model_config = ConfigDict(frozen=True)

    times: List[float]
    records: List[Dict[str, float]]

    @field_validator("times")
    @classmethod
    def check_increasing(cls, v: List[float]) -> List[float]:
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("times must be strictly increasing")
        return v

    @model_validator(mode="after")
    def check_records(self) -> "TimeSeries":
        if len(self.records) != len(self.times):
            raise ValueError(f"{len(self.records)} records for {len(self.times)} times")
        for record in self.records:
            if not all(math.isfinite(value) for value in record.values()):
                raise ValueError("observable values must be finite")
        return self

    @property
    def names(self) -> List[str]:
        return list(self.records[0]) if self.records else []

    def column(self, name: str) -> np.ndarray:
        return np.array([record[name] for record in self.records])

    def with_fluctuations(self) -> "TimeSeries":
        """Add F_x = <n_x^2> - N_x^2 for every pair of columns nsq_x and N_x."""
        pairs = [(name[len("nsq_") :], name) for name in self.names if name.startswith("nsq_")]
        pairs = [(suffix, square) for suffix, square in pairs if f"N_{suffix}" in self.names]

        records = []
        for record in self.records:
            extended = dict(record)
            for suffix, square in pairs:
                extended[f"F_{suffix}"] = record[square] - record[f"N_{suffix}"] ** 2
            records.append(extended)
        return TimeSeries(times=list(self.times), records=records)
