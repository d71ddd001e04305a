"""Per-cavity species observables."""

from typing import List, Tuple

from src.schemas.models.specs import ModelSpec
from src.services.fock.operators import SparseOperator
from src.services.models.polaritons import species_number_op


def observables_bc(spec: ModelSpec, site: int) -> List[Tuple[str, SparseOperator]]:
    """N_b, N_c and their squares at one site, named with the 1-based cavity number.

    TimeSeries.with_fluctuations turns nsq_x/N_x pairs into F_x = <n_x^2> - N_x^2.
    """
    cavity = site + 1
    n_b = species_number_op(spec, "b", site)
    n_c = species_number_op(spec, "c", site)
    return [
        (f"N_b_{cavity}", n_b),
        (f"N_c_{cavity}", n_c),
        (f"nsq_b_{cavity}", n_b @ n_b),
        (f"nsq_c_{cavity}", n_c @ n_c),
    ]


def all_observables(spec: ModelSpec) -> List[Tuple[str, SparseOperator]]:
    return [item for site in range(spec.lattice.n_sites) for item in observables_bc(spec, site)]
