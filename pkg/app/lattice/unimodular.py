"""
Unimodular completion and inversion.
"""

import logging
from typing import Sequence

from sympy import Matrix
from sympy.matrices.normalforms import invariant_factors

from app.errors import NotExtendable, NotUnimodular
from app.lattice.integer import (
    IntMat,
    as_intmat,
    column_reduce,
    determinant,
    is_primitive,
    rank,
    rational_inverse,
)

logger = logging.getLogger(__name__)


def is_saturated(vectors: Sequence[Sequence[int]]) -> bool:
    """True iff the vectors span a direct summand of Z^n (all invariant factors are 1)."""
    if not vectors:
        return True
    if rank(vectors) < len(vectors):
        return False
    factors = invariant_factors(Matrix([list(v) for v in vectors]))
    return all(abs(int(f)) == 1 for f in factors)


def unimodular_complete(partial_basis: Sequence[Sequence[int]], n: int = None) -> IntMat:
    """Complete k primitive vectors to a unimodular n x n integer matrix.

    Args:
        partial_basis: The k vectors that become the first k rows.
        n: Ambient dimension (inferred from the vectors when omitted).

    Returns:
        Square integer matrix with the inputs as leading rows and det = +1
        (det = +-1 when k = n).

    Raises:
        NotExtendable: If the vectors do not span a saturated sublattice.
    """
    rows = as_intmat(partial_basis)
    if n is None:
        if not rows:
            raise ValueError("Ambient dimension required for an empty partial basis")
        n = len(rows[0])
    if any(len(r) != n for r in rows):
        raise ValueError("All partial basis vectors must have the ambient dimension")

    for r in rows:
        if not is_primitive(r):
            raise NotExtendable(f"Vector {r} is not primitive", vector=r)
    if not is_saturated(rows):
        raise NotExtendable(
            f"Vectors {list(rows)} do not span a saturated sublattice of Z^{n}",
            vectors=rows,
        )

    k = len(rows)
    _, u, r = column_reduce(rows, n)
    assert r == k
    u_inv = rational_inverse(u)
    completion = [tuple(int(x) for x in u_inv[i]) for i in range(k, n)]
    result = [tuple(row) for row in rows] + completion

    det = determinant(result)
    if abs(det) != 1:
        raise NotExtendable(f"Completion has determinant {det}", vectors=rows)
    if det == -1 and k < n:
        result[-1] = tuple(-x for x in result[-1])

    logger.debug(f"Completed {k} vectors to a unimodular {n}x{n} matrix")
    return tuple(result)


def invert_unimodular(w: Sequence[Sequence[int]]) -> IntMat:
    """Exact inverse of a unimodular integer matrix.

    Raises:
        NotUnimodular: If the matrix is not square or |det| != 1.
    """
    rows = as_intmat(w)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise NotUnimodular("Matrix is not square")
    det = determinant(rows)
    if abs(det) != 1:
        raise NotUnimodular(f"Determinant is {det}, expected +-1", determinant=det)
    inverse = rational_inverse(rows)
    return tuple(tuple(int(x) for x in row) for row in inverse)


def is_unimodular(w: Sequence[Sequence[int]]) -> bool:
    rows = as_intmat(w)
    return bool(rows) and all(len(r) == len(rows) for r in rows) and abs(determinant(rows)) == 1
