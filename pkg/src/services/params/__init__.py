from .mapping import (
    REFERENCE_COOPERATIVITIES,
    VALIDITY_CONDITIONS,
    check_validity,
    cooperativity,
    decay_model,
    decay_rates,
    derive_scales,
    informational_ratios,
    map_effective,
)
from .optimize import crossover_region, optimize_ratio, ratio_at

__all__ = [
    "REFERENCE_COOPERATIVITIES",
    "VALIDITY_CONDITIONS",
    "check_validity",
    "cooperativity",
    "crossover_region",
    "decay_model",
    "decay_rates",
    "derive_scales",
    "informational_ratios",
    "map_effective",
    "optimize_ratio",
    "ratio_at",
]
