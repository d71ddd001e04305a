"""Basis enumeration and state ranking for truncated Fock spaces."""

import logging
from functools import lru_cache
from typing import Dict, List, Optional

import numpy as np
from src.config import get_settings
from src.exceptions import DimensionOverflow, InadmissibleState, IndexOutOfRange
from src.schemas.fock.models import BasisState, ModeSpace

logger = logging.getLogger(__name__)

_INT64_MAX = np.iinfo(np.int64).max


def count_basis(space: ModeSpace) -> int:
    """Number of admissible states, counted without enumerating them."""
    budget = space.max_total
    # suffix[b]: admissible completions of the remaining modes with weighted budget b
    suffix = [1] * (budget + 1)
    for mode in reversed(range(space.n_modes)):
        weight, limit = space.weights[mode], space.mode_limit(mode)
        suffix = [sum(suffix[b - weight * n] for n in range(min(limit, b // weight) + 1)) for b in range(budget + 1)]
    return suffix[budget]


class FockBasis:
    """Enumerated basis of a ModeSpace with vectorized ranking.

    Rows of ``table`` are occupation vectors in lexicographic order; row i has rank i.
    """

    def __init__(self, space: ModeSpace, table: np.ndarray):
        self.space = space
        self.table = table
        self.table.setflags(write=False)
        self.dim = int(table.shape[0])

        radices = [space.mode_limit(m) + 1 for m in range(space.n_modes)]
        strides = [1] * space.n_modes
        for m in range(space.n_modes - 2, -1, -1):
            strides[m] = strides[m + 1] * radices[m + 1]

        self._packed = strides[0] * radices[0] <= _INT64_MAX
        if self._packed:
            # Mixed-radix keys are increasing along the lexicographic order
            self._strides = np.asarray(strides, dtype=np.int64)
            self._keys = table @ self._strides
            self._lookup: Dict[BasisState, int] = {}
        else:
            self._lookup = {tuple(int(n) for n in row): i for i, row in enumerate(table)}

    def __len__(self) -> int:
        return self.dim

    def rank(self, state: BasisState) -> int:
        """Index of an admissible occupation vector."""
        state = tuple(int(n) for n in state)
        if not self.space.is_admissible(state):
            raise InadmissibleState(f"{state} is not admissible in a {self.space.n_modes}-mode space with K={self.space.max_total}")
        if not self._packed:
            return self._lookup[state]
        return int(np.searchsorted(self._keys, np.dot(state, self._strides)))

    def unrank(self, index: int) -> BasisState:
        if not 0 <= index < self.dim:
            raise IndexOutOfRange(f"index {index} outside 0..{self.dim - 1}")
        return tuple(int(n) for n in self.table[index])

    def index_of(self, rows: np.ndarray) -> np.ndarray:
        """Ranks of many occupation vectors at once; -1 where a row is not admissible."""
        rows = np.asarray(rows, dtype=np.int64)
        if rows.size == 0:
            return np.zeros(0, dtype=np.int64)

        valid = (rows >= 0).all(axis=1)
        valid &= rows @ np.asarray(self.space.weights, dtype=np.int64) <= self.space.max_total
        limits = np.array([self.space.mode_limit(m) for m in range(self.space.n_modes)], dtype=np.int64)
        valid &= (rows <= limits).all(axis=1)

        result = np.full(rows.shape[0], -1, dtype=np.int64)
        if not self._packed:
            for i in np.flatnonzero(valid):
                result[i] = self._lookup[tuple(int(n) for n in rows[i])]
            return result

        keys = rows[valid] @ self._strides
        result[valid] = np.searchsorted(self._keys, keys)
        return result


def _enumerate_table(space: ModeSpace) -> np.ndarray:
    # Extends every prefix by all allowed occupations of the next mode; prefixes stay sorted
    rows = np.zeros((1, 0), dtype=np.int64)
    budget = np.array([space.max_total], dtype=np.int64)

    for mode in range(space.n_modes):
        weight = space.weights[mode]
        top = budget // weight
        if space.per_mode_cap is not None:
            top = np.minimum(top, space.per_mode_cap[mode])
        counts = top + 1

        parent = np.repeat(np.arange(rows.shape[0]), counts)
        offsets = np.repeat(np.cumsum(counts) - counts, counts)
        occupation = np.arange(parent.size, dtype=np.int64) - offsets

        rows = np.column_stack([rows[parent], occupation])
        budget = budget[parent] - weight * occupation

    return rows


@lru_cache(maxsize=64)
def _build_basis(space: ModeSpace, max_dimension: int) -> FockBasis:
    dim = count_basis(space)
    if dim > max_dimension:
        raise DimensionOverflow(f"basis of {dim} states exceeds the cap of {max_dimension}")

    basis = FockBasis(space, _enumerate_table(space))
    logger.debug(f"Enumerated Fock basis: modes={space.n_modes}, K={space.max_total}, dim={basis.dim}")
    return basis


def get_basis(space: ModeSpace, max_dimension: Optional[int] = None) -> FockBasis:
    """Cached basis for a space.

    :param space: Mode space
    :param max_dimension: Cap on the number of states, defaults to FOCK__MAX_DIMENSION
    :raises DimensionOverflow: if the space has more states than the cap
    """
    if max_dimension is None:
        max_dimension = get_settings().fock.max_dimension
    return _build_basis(space, max_dimension)


def enumerate_basis(space: ModeSpace, max_dimension: Optional[int] = None) -> List[BasisState]:
    """Admissible states in lexicographic order."""
    basis = get_basis(space, max_dimension)
    return [tuple(int(n) for n in row) for row in basis.table]


def rank(space: ModeSpace, state: BasisState) -> int:
    return get_basis(space).rank(state)


def unrank(space: ModeSpace, index: int) -> BasisState:
    return get_basis(space).unrank(index)
