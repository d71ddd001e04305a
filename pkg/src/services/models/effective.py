"""Two-component Bose-Hubbard Hamiltonian."""

import logging
from typing import List

import numpy as np
from src.schemas.models.specs import EffectiveModelSpec
from src.services.fock.operators import SparseOperator, ladder, total
from src.services.fock.space import get_basis
from src.utils.logging import OperationTimer, StructuredLogger

logger = logging.getLogger(__name__)
structured_logger = StructuredLogger(__name__)


def _onsite_diagonal(spec: EffectiveModelSpec) -> np.ndarray:
    params = spec.params
    table = get_basis(spec.mode_space()).table.astype(float)
    diagonal = np.zeros(table.shape[0])

    for site in range(spec.lattice.n_sites):
        n_b = table[:, spec.mode("b", site)]
        n_c = table[:, spec.mode("c", site)]
        diagonal += params.mu_b * n_b + params.mu_c * n_c
        diagonal += params.u_b * n_b * (n_b - 1.0) + params.u_c * n_c * (n_c - 1.0) + params.u_bc * n_b * n_c
        if spec.include_two_photon_detuning:
            diagonal += params.eps_b * n_b + params.eps_c * n_c
    return diagonal


def _with_conjugate(term: SparseOperator) -> SparseOperator:
    return term + term.adjoint()


def build_effective_hamiltonian(spec: EffectiveModelSpec) -> SparseOperator:
    """Assemble H_eff on the (b, c) Fock space of the lattice.

    On site: mu_b n_b + mu_c n_c + U_b n_b(n_b - 1) + U_c n_c(n_c - 1) + U_bc n_b n_c.
    Per edge: J_bb b+b' + J_cc c+c' - J_bc (b+c' + c+b') + h.c.
    Optional: eps_b n_b + eps_c n_c + eps_bc (b+c + c+b) and pair_conv (c+c+bb + b+b+cc) per site.

    :param spec: Effective model: parameters, lattice and particle cap
    :returns: Hermitian SparseOperator
    :raises DimensionOverflow: if the truncated space is too large
    """
    space = spec.mode_space()
    params = spec.params
    raise_ = lambda m: ladder(space, m, "raise")
    lower = lambda m: ladder(space, m, "lower")

    with OperationTimer("build_effective_hamiltonian", structured_logger, n_sites=spec.lattice.n_sites):
        dim = get_basis(space).dim
        terms: List[SparseOperator] = [SparseOperator.diagonal(_onsite_diagonal(spec))]

        tunneling = {
            ("b", "b"): params.j_bb,
            ("c", "c"): params.j_cc,
            ("b", "c"): -params.j_bc,
            ("c", "b"): -params.j_bc,
        }
        for site, neighbour in spec.lattice.edges:
            for (j, l), rate in tunneling.items():
                if rate == 0.0:
                    continue
                hop = raise_(spec.mode(j, site)) @ lower(spec.mode(l, neighbour))
                terms.append(_with_conjugate(hop) * rate)

        for site in range(spec.lattice.n_sites):
            b, c = spec.mode("b", site), spec.mode("c", site)
            if spec.include_two_photon_detuning and params.eps_bc != 0.0:
                terms.append(_with_conjugate(raise_(b) @ lower(c)) * params.eps_bc)
            if spec.include_pair_conversion and params.pair_conv != 0.0:
                pair = raise_(c) @ raise_(c) @ lower(b) @ lower(b)
                terms.append(_with_conjugate(pair) * params.pair_conv)

        hamiltonian = total(terms, dim)

    logger.debug(f"Effective Hamiltonian: dim={hamiltonian.dim}, nnz={hamiltonian.nnz}")
    return hamiltonian
