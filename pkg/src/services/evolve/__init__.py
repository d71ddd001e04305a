from .factory import make_propagator_config
from .observables import all_observables, observables_bc
from .propagator import DensePropagator, KrylovPropagator, check_hermitian, evolve, propagate

__all__ = [
    "DensePropagator",
    "KrylovPropagator",
    "all_observables",
    "check_hermitian",
    "evolve",
    "make_propagator_config",
    "observables_bc",
    "propagate",
]
