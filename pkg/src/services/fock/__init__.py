from .operators import (
    SparseOperator,
    add,
    adjoint,
    commutator,
    compose,
    ladder,
    number_op,
    scale,
    total,
    weighted_number_op,
)
from .space import FockBasis, count_basis, enumerate_basis, get_basis, rank, unrank

__all__ = [
    "FockBasis",
    "SparseOperator",
    "add",
    "adjoint",
    "commutator",
    "compose",
    "count_basis",
    "enumerate_basis",
    "get_basis",
    "ladder",
    "number_op",
    "rank",
    "scale",
    "total",
    "unrank",
    "weighted_number_op",
]
