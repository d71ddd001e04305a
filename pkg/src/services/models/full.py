"""Bosonized atom-cavity Hamiltonian."""

import logging
import math
from typing import List

import numpy as np
from src.schemas.models.specs import FullModelSpec, LatticeSpec
from src.services.fock.operators import SparseOperator, ladder, total
from src.services.fock.space import get_basis
from src.utils.logging import OperationTimer, StructuredLogger

logger = logging.getLogger(__name__)
structured_logger = StructuredLogger(__name__)


def build_full_hamiltonian(spec: FullModelSpec) -> SparseOperator:
    """Assemble H_full on the (a, s12, s13, s14) Fock space of the lattice.

    Per site: eps n_s12 + delta n_s13 + (Delta + eps) n_s14
    + [Omega s12+ s13 + g a+ s13 + g24 a+ s12+ s14 + h.c.] with g = sqrt(N) g13.
    Per edge: alpha (a+_R a_R' + h.c.).

    :param spec: Full model: parameters, lattice and excitation cap
    :returns: Hermitian SparseOperator commuting with sum(n_a + n_s12 + n_s13 + 2 n_s14)
    :raises DimensionOverflow: if the truncated space is too large
    """
    p = spec.params
    space = spec.mode_space()
    g = math.sqrt(p.n_atoms) * p.g13

    def raise_(name: str, site: int) -> SparseOperator:
        return ladder(space, spec.mode(name, site), "raise")

    def lower(name: str, site: int) -> SparseOperator:
        return ladder(space, spec.mode(name, site), "lower")

    with OperationTimer("build_full_hamiltonian", structured_logger, n_sites=spec.lattice.n_sites):
        table = get_basis(space).table.astype(float)
        diagonal = np.zeros(table.shape[0])
        terms: List[SparseOperator] = []

        for site in range(spec.lattice.n_sites):
            diagonal += p.epsilon * table[:, spec.mode("s12", site)]
            diagonal += p.delta * table[:, spec.mode("s13", site)]
            diagonal += (p.big_delta + p.epsilon) * table[:, spec.mode("s14", site)]

            couplings = [
                (p.omega, raise_("s12", site) @ lower("s13", site)),
                (g, raise_("a", site) @ lower("s13", site)),
                (p.g24, raise_("a", site) @ raise_("s12", site) @ lower("s14", site)),
            ]
            for strength, term in couplings:
                if strength != 0.0:
                    terms.append((term + term.adjoint()) * strength)

        if p.alpha != 0.0:
            for site, neighbour in spec.lattice.edges:
                hop = raise_("a", site) @ lower("a", neighbour)
                terms.append((hop + hop.adjoint()) * p.alpha)

        terms.insert(0, SparseOperator.diagonal(diagonal))
        hamiltonian = total(terms, table.shape[0])

    logger.debug(f"Full Hamiltonian: dim={hamiltonian.dim}, nnz={hamiltonian.nnz}")
    return hamiltonian


def single_cavity_spectrum(spec: FullModelSpec, n_exc: int) -> np.ndarray:
    """Sorted eigenvalues of one cavity's full Hamiltonian in the sector of n_exc weighted excitations.

    For n_exc = 1 this is {0, (delta - A)/2, (delta + A)/2}.
    """
    single = FullModelSpec(params=spec.params, lattice=LatticeSpec(n_sites=1), max_excitations=n_exc)
    hamiltonian = build_full_hamiltonian(single).to_dense()

    space = single.mode_space()
    sector = get_basis(space).table @ np.asarray(space.weights) == n_exc
    block = hamiltonian[np.ix_(sector, sector)]
    return np.linalg.eigvalsh(block)
