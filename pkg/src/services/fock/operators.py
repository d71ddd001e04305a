"""Sparse operators on truncated Fock spaces."""

from functools import lru_cache
from numbers import Number
from typing import Iterable, List, Literal, Tuple, Union

import numpy as np
import scipy.sparse as sp
from src.exceptions import DimMismatch
from src.schemas.fock.models import ModeSpace
from src.services.fock.space import get_basis

DROP_TOLERANCE = 1e-15

Direction = Literal["raise", "lower"]


class SparseOperator:
    """Immutable complex operator stored as a CSR matrix.

    Duplicate entries are summed and entries with |amplitude| < 1e-15 dropped on construction.
    """

    __slots__ = ("_matrix",)
    # numpy scalars defer to __rmul__
    __array_ufunc__ = None

    def __init__(self, matrix: Union[sp.spmatrix, np.ndarray]):
        csr = sp.csr_matrix(matrix, dtype=np.complex128, copy=True)
        if csr.shape[0] != csr.shape[1]:
            raise DimMismatch(f"operator must be square, got shape {csr.shape}")
        csr.sum_duplicates()
        csr.data[np.abs(csr.data) < DROP_TOLERANCE] = 0.0
        csr.eliminate_zeros()
        csr.sort_indices()
        self._matrix = csr

    @classmethod
    def from_entries(cls, dim: int, entries: Iterable[Tuple[int, int, complex]]) -> "SparseOperator":
        entries = list(entries)
        if not entries:
            return cls.zeros(dim)
        rows, cols, values = zip(*entries)
        return cls(sp.coo_matrix((values, (rows, cols)), shape=(dim, dim)))

    @classmethod
    def zeros(cls, dim: int) -> "SparseOperator":
        return cls(sp.csr_matrix((dim, dim), dtype=np.complex128))

    @classmethod
    def identity(cls, dim: int) -> "SparseOperator":
        return cls(sp.identity(dim, dtype=np.complex128, format="csr"))

    @classmethod
    def diagonal(cls, values: np.ndarray) -> "SparseOperator":
        return cls(sp.diags(np.asarray(values, dtype=np.complex128), format="csr"))

    @property
    def matrix(self) -> sp.csr_matrix:
        """Underlying CSR matrix; treat as read-only."""
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    @property
    def nnz(self) -> int:
        return self._matrix.nnz

    def entries(self) -> List[Tuple[int, int, complex]]:
        coo = self._matrix.tocoo()
        return [(int(r), int(c), complex(v)) for r, c, v in zip(coo.row, coo.col, coo.data)]

    def to_dense(self) -> np.ndarray:
        return self._matrix.toarray()

    def _check_dim(self, other: "SparseOperator") -> None:
        if self.dim != other.dim:
            raise DimMismatch(f"operator dimensions differ: {self.dim} vs {other.dim}")

    def __add__(self, other: "SparseOperator") -> "SparseOperator":
        if not isinstance(other, SparseOperator):
            return NotImplemented
        self._check_dim(other)
        return SparseOperator(self._matrix + other._matrix)

    def __sub__(self, other: "SparseOperator") -> "SparseOperator":
        if not isinstance(other, SparseOperator):
            return NotImplemented
        self._check_dim(other)
        return SparseOperator(self._matrix - other._matrix)

    def __neg__(self) -> "SparseOperator":
        return SparseOperator(-self._matrix)

    def __mul__(self, factor: Number) -> "SparseOperator":
        if not isinstance(factor, Number):
            return NotImplemented
        return SparseOperator(self._matrix * complex(factor))

    __rmul__ = __mul__

    def __matmul__(self, other: "SparseOperator") -> "SparseOperator":
        if not isinstance(other, SparseOperator):
            return NotImplemented
        self._check_dim(other)
        return SparseOperator(self._matrix @ other._matrix)

    def adjoint(self) -> "SparseOperator":
        return SparseOperator(self._matrix.conj().T)

    def apply(self, vector: np.ndarray) -> np.ndarray:
        vector = np.asarray(vector, dtype=np.complex128)
        if vector.shape[0] != self.dim:
            raise DimMismatch(f"vector of length {vector.shape[0]} for operator of dim {self.dim}")
        return self._matrix @ vector

    def expectation(self, vector: np.ndarray) -> complex:
        """<v|X|v> without normalization."""
        vector = np.asarray(vector, dtype=np.complex128)
        return complex(np.vdot(vector, self.apply(vector)))

    def max_abs(self) -> float:
        return float(np.abs(self._matrix.data).max()) if self._matrix.nnz else 0.0

    def hermiticity_error(self) -> float:
        """max |X - X^dagger| entrywise."""
        diff = self._matrix - self._matrix.conj().T
        return float(np.abs(diff.data).max()) if diff.nnz else 0.0

    def is_hermitian(self, tol: float = 1e-13) -> bool:
        return self.hermiticity_error() <= tol

    def __repr__(self) -> str:
        return f"SparseOperator(dim={self.dim}, nnz={self.nnz})"


@lru_cache(maxsize=1024)
def ladder(space: ModeSpace, mode: int, direction: Direction) -> SparseOperator:
    """Creation (raise) or annihilation (lower) operator of one mode with hard truncation.

    Matrix elements whose raised image is not admissible are absent.
    """
    if not 0 <= mode < space.n_modes:
        raise IndexError(f"mode {mode} outside 0..{space.n_modes - 1}")
    if direction not in ("raise", "lower"):
        raise ValueError(f"direction must be 'raise' or 'lower', got {direction}")

    basis = get_basis(space)
    table = basis.table
    occupation = table[:, mode]

    if direction == "lower":
        source = np.flatnonzero(occupation > 0)
        amplitude = np.sqrt(occupation[source].astype(float))
        step = -1
    else:
        source = np.arange(basis.dim)
        amplitude = np.sqrt(occupation.astype(float) + 1.0)
        step = 1

    shifted = table[source].copy()
    shifted[:, mode] += step
    target = basis.index_of(shifted)
    keep = target >= 0

    matrix = sp.coo_matrix((amplitude[keep], (target[keep], source[keep])), shape=(basis.dim, basis.dim))
    return SparseOperator(matrix)


@lru_cache(maxsize=1024)
def number_op(space: ModeSpace, mode: int) -> SparseOperator:
    if not 0 <= mode < space.n_modes:
        raise IndexError(f"mode {mode} outside 0..{space.n_modes - 1}")
    return SparseOperator.diagonal(get_basis(space).table[:, mode].astype(float))


def weighted_number_op(space: ModeSpace) -> SparseOperator:
    """Sum_m weights[m] n_m, the conserved excitation count."""
    table = get_basis(space).table
    return SparseOperator.diagonal((table @ np.asarray(space.weights)).astype(float))


def compose(x: SparseOperator, y: SparseOperator) -> SparseOperator:
    """Operator product X Y (Y acts first)."""
    return x @ y


def add(x: SparseOperator, y: SparseOperator) -> SparseOperator:
    return x + y


def scale(x: SparseOperator, factor: complex) -> SparseOperator:
    return x * factor


def adjoint(x: SparseOperator) -> SparseOperator:
    return x.adjoint()


def commutator(x: SparseOperator, y: SparseOperator) -> SparseOperator:
    return x @ y - y @ x


def total(operators: Iterable[SparseOperator], dim: int) -> SparseOperator:
    """Sum of operators merged in iteration order."""
    matrix = sp.csr_matrix((dim, dim), dtype=np.complex128)
    for op in operators:
        if op.dim != dim:
            raise DimMismatch(f"operator dimensions differ: {op.dim} vs {dim}")
        matrix = matrix + op.matrix
    return SparseOperator(matrix)
