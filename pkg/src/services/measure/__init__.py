from .factory import make_pulse_spec, make_stirap_spec
from .protocol import (
    calibrate_swap,
    classical_fidelity,
    ideal_statistics,
    level_distribution,
    make_system,
    prepare_polariton_state,
    raman_swap,
    run_protocol,
    species_statistics,
    stirap_map,
    stirap_theta0,
)

__all__ = [
    "calibrate_swap",
    "classical_fidelity",
    "ideal_statistics",
    "level_distribution",
    "make_pulse_spec",
    "make_stirap_spec",
    "make_system",
    "prepare_polariton_state",
    "raman_swap",
    "run_protocol",
    "species_statistics",
    "stirap_map",
    "stirap_theta0",
]
