"""Dense operators on the few-atom (x) photon Hilbert space."""

from functools import lru_cache
from typing import Tuple

import numpy as np

N_LEVELS = 4


def single_atom_sigma(k: int, l: int) -> np.ndarray:
    """|k><l| on one atom, levels 1..4."""
    sigma = np.zeros((N_LEVELS, N_LEVELS), dtype=np.complex128)
    sigma[k - 1, l - 1] = 1.0
    return sigma


def photon_lower(photon_cap: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, photon_cap + 1, dtype=float)), k=1).astype(np.complex128)


def embed(factors: Tuple[np.ndarray, ...]) -> np.ndarray:
    result = np.ones((1, 1), dtype=np.complex128)
    for factor in factors:
        result = np.kron(result, factor)
    return result


def atom_operator(n_atoms: int, photon_cap: int, atom: int, op: np.ndarray) -> np.ndarray:
    """Single-atom operator acting on atom ``atom`` (0-based), identity elsewhere."""
    factors = [np.eye(N_LEVELS) for _ in range(n_atoms)] + [np.eye(photon_cap + 1)]
    factors[atom] = op
    return embed(tuple(factors))


def sigma(n_atoms: int, photon_cap: int, atom: int, k: int, l: int) -> np.ndarray:
    return atom_operator(n_atoms, photon_cap, atom, single_atom_sigma(k, l))


def photon_op(n_atoms: int, photon_cap: int) -> np.ndarray:
    factors = [np.eye(N_LEVELS) for _ in range(n_atoms)] + [photon_lower(photon_cap)]
    return embed(tuple(factors))


@lru_cache(maxsize=16)
def basis_labels(n_atoms: int, photon_cap: int) -> np.ndarray:
    """Rows (level of atom 1, ..., level of atom n, photons) in tensor order, levels 1..4."""
    grids = np.meshgrid(*([np.arange(1, N_LEVELS + 1)] * n_atoms), np.arange(photon_cap + 1), indexing="ij")
    labels = np.stack([grid.ravel() for grid in grids], axis=1)
    labels.setflags(write=False)
    return labels


def level_count(n_atoms: int, photon_cap: int, level: int) -> np.ndarray:
    """Number of atoms in ``level`` for every basis state."""
    labels = basis_labels(n_atoms, photon_cap)
    return (labels[:, :n_atoms] == level).sum(axis=1)


def photon_count(n_atoms: int, photon_cap: int) -> np.ndarray:
    return basis_labels(n_atoms, photon_cap)[:, n_atoms]


def collective_raise(n_atoms: int, photon_cap: int, upper: int, lower: int) -> np.ndarray:
    """n^{-1/2} sum_j |upper><lower|_j."""
    total = sum(sigma(n_atoms, photon_cap, j, upper, lower) for j in range(n_atoms))
    return total / np.sqrt(n_atoms)


def ground_state(n_atoms: int, photon_cap: int, level: int = 1) -> np.ndarray:
    """All atoms in ``level``, photon vacuum."""
    labels = basis_labels(n_atoms, photon_cap)
    target = (labels[:, :n_atoms] == level).all(axis=1) & (labels[:, n_atoms] == 0)
    return target.astype(np.complex128)
