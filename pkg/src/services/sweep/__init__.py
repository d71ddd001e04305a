from .factory import make_omega_grid, make_sample_times
from .runner import (
    COMPARED_OBSERVABLES,
    compare_full_vs_effective,
    model_spec,
    omega_grid,
    run_model,
    sweep_omega,
    sweep_row,
)

__all__ = [
    "COMPARED_OBSERVABLES",
    "compare_full_vs_effective",
    "make_omega_grid",
    "make_sample_times",
    "model_spec",
    "omega_grid",
    "run_model",
    "sweep_omega",
    "sweep_row",
]
