"""
Exact integer and rational vector/matrix helpers.
Vectors are tuples of Python ints (arbitrary precision); rationals are Fractions.
"""

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import List, Optional, Sequence, Tuple

from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

IntVec = Tuple[int, ...]
IntMat = Tuple[IntVec, ...]
Rat = Fraction


def as_intvec(values: Sequence[int]) -> IntVec:
    return tuple(int(v) for v in values)


def as_intmat(rows: Sequence[Sequence[int]]) -> IntMat:
    return tuple(as_intvec(r) for r in rows)


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def vec_add(a: Sequence, b: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(c, a: Sequence) -> tuple:
    return tuple(c * x for x in a)


def content(v: Sequence[int]) -> int:
    return reduce(gcd, (abs(int(x)) for x in v), 0)


def primitive(v: Sequence) -> IntVec:
    """Scale a rational or integer vector to the primitive integer vector on its ray."""
    fracs = [Fraction(x) for x in v]
    denom = reduce(lambda a, b: a * b // gcd(a, b), (f.denominator for f in fracs), 1)
    ints = [int(f * denom) for f in fracs]
    g = content(ints)
    if g == 0:
        return tuple(0 for _ in ints)
    return tuple(x // g for x in ints)


def is_primitive(v: Sequence[int]) -> bool:
    return content(v) == 1


def transpose(rows: Sequence[Sequence]) -> tuple:
    if not rows:
        return ()
    return tuple(tuple(col) for col in zip(*rows))


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def vec_mat(v: Sequence, m: Sequence[Sequence]) -> tuple:
    """Row vector times matrix."""
    return tuple(dot(v, col) for col in transpose(m))


def mat_vec(m: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in m)


def identity(n: int) -> IntMat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def _qq(x):
    value = Fraction(x)
    return QQ(value.numerator, value.denominator)


def _domain_matrix(rows: Sequence[Sequence], domain) -> DomainMatrix:
    convert = (lambda x: ZZ(int(x))) if domain == ZZ else _qq
    entries = [[convert(x) for x in r] for r in rows]
    return DomainMatrix(entries, (len(entries), len(entries[0]) if entries else 0), domain)


def _to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def determinant(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix."""
    if not rows:
        return 1
    return int(_domain_matrix(rows, ZZ).det())


def rref(rows: Sequence[Sequence]) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form over the rationals; returns (matrix, pivot columns)."""
    if not rows:
        return [], []
    reduced, pivots = _domain_matrix(rows, QQ).rref()
    return [[_to_fraction(x) for x in r] for r in reduced.to_list()], list(pivots)


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: Optional[int] = None) -> List[IntVec]:
    """Primitive integer basis (not necessarily a lattice basis) of the rational kernel."""
    if not rows:
        n = ncols or 0
        return [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
    m, pivots = rref(rows)
    n = len(m[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fcol in free:
        vec = [Fraction(0)] * n
        vec[fcol] = Fraction(1)
        for row_idx, pcol in enumerate(pivots):
            vec[pcol] = -m[row_idx][fcol]
        basis.append(primitive(vec))
    return basis


def solve_rational(rows: Sequence[Sequence], rhs: Sequence) -> Optional[List[Fraction]]:
    """One rational solution of rows·x = rhs, or None when inconsistent."""
    augmented = [list(r) + [b] for r, b in zip(rows, rhs)]
    m, pivots = rref(augmented)
    n = len(rows[0])
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row_idx, pcol in enumerate(pivots):
        x[pcol] = m[row_idx][n]
    return x


def rational_inverse(rows: Sequence[Sequence]) -> List[List[Fraction]]:
    m = _domain_matrix(rows, QQ)
    if m.det() == 0:
        raise ZeroDivisionError("matrix is singular")
    return [[_to_fraction(x) for x in r] for r in m.inv().to_list()]


def ext_gcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r != 0:
        quotient = old_r // r
        old_r, r = r, old_r - quotient * r
        old_x, x = x, old_x - quotient * x
        old_y, y = y, old_y - quotient * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def column_reduce(rows: Sequence[Sequence[int]], n: int) -> Tuple[List[List[int]], List[List[int]], int]:
    """Column-style Hermite reduction.

    Finds a unimodular U with rows·U = [H | 0], H lower triangular with
    positive pivots.

    Returns:
        (rows·U, U, rank)
    """
    a = [list(map(int, r)) for r in rows]
    u = [list(r) for r in identity(n)]

    def combine(p: int, j: int, x: int, y: int, s: int, t: int) -> None:
        # col_p <- x col_p + y col_j ; col_j <- s col_p + t col_j
        for mat in (a, u):
            for row in mat:
                cp, cj = row[p], row[j]
                row[p] = x * cp + y * cj
                row[j] = s * cp + t * cj

    pivot = 0
    for i in range(len(a)):
        if pivot >= n:
            break
        for j in range(pivot + 1, n):
            b = a[i][j]
            if b == 0:
                continue
            p_val = a[i][pivot]
            g, x, y = ext_gcd(p_val, b)
            combine(pivot, j, x, y, -b // g, p_val // g)
        if a[i][pivot] != 0:
            if a[i][pivot] < 0:
                for mat in (a, u):
                    for row in mat:
                        row[pivot] = -row[pivot]
            pivot += 1
    return a, u, pivot


def kernel_lattice(rows: Sequence[Sequence[int]], n: int) -> List[IntVec]:
    """Lattice basis of {x in Z^n : rows·x = 0} (a saturated sublattice)."""
    if not rows:
        return list(identity(n))
    _, u, r = column_reduce(rows, n)
    return [tuple(u[i][j] for i in range(n)) for j in range(r, n)]


def saturated_span(vectors: Sequence[Sequence[int]], n: int) -> List[IntVec]:
    """Lattice basis of Z^n intersected with the rational span of the vectors."""
    vectors = [v for v in vectors if any(v)]
    if not vectors:
        return []
    orthogonal = kernel_lattice(vectors, n)
    return kernel_lattice(orthogonal, n)


def lattice_coordinates(basis: Sequence[Sequence[int]], v: Sequence) -> Optional[List[Fraction]]:
    """Coordinates of v in the given (independent) basis, or None if v is off the span."""
    if not basis:
        return [] if not any(v) else None
    return solve_rational(transpose(basis), v)
