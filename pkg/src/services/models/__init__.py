from .effective import build_effective_hamiltonian
from .full import build_full_hamiltonian, single_cavity_spectrum
from .polaritons import polariton_creation, prepare_state, species_number_op, vacuum

__all__ = [
    "build_effective_hamiltonian",
    "build_full_hamiltonian",
    "polariton_creation",
    "prepare_state",
    "single_cavity_spectrum",
    "species_number_op",
    "vacuum",
]
