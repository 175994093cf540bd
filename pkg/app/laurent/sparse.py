"""
Sparse Laurent polynomials over exact rationals (or any numeric coefficient type).
"""

import logging
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from app.errors import NotUnimodular
from app.lattice.integer import IntVec, as_intmat, vec_add, vec_mat
from app.lattice.unimodular import is_unimodular

logger = logging.getLogger(__name__)


def _is_zero(c) -> bool:
    try:
        return c == 0
    except TypeError:
        return False


class SparsePoly:
    """Map from integer exponent vectors (negative entries allowed) to coefficients."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Optional[Mapping[Sequence[int], object]] = None):
        self.n = n
        self.terms: Dict[IntVec, object] = {}
        for exp, coef in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != n:
                raise ValueError(f"Exponent {exp} does not have length {n}")
            if _is_zero(coef):
                continue
            total = self.terms.get(exp, 0) + coef
            if _is_zero(total):
                self.terms.pop(exp, None)
            else:
                self.terms[exp] = total

    # =========================================================================
    # Construction
    # =========================================================================

    @classmethod
    def from_terms(cls, n: int, terms: Iterable[Tuple[object, Sequence[int]]]) -> "SparsePoly":
        poly = cls(n)
        for coef, exp in terms:
            poly = poly + cls(n, {tuple(exp): coef})
        return poly

    @classmethod
    def constant(cls, n: int, value) -> "SparsePoly":
        return cls(n, {tuple([0] * n): value})

    @classmethod
    def variable(cls, n: int, i: int) -> "SparsePoly":
        return cls(n, {tuple(1 if j == i else 0 for j in range(n)): Fraction(1)})

    @classmethod
    def monomial(cls, exp: Sequence[int], coef=Fraction(1)) -> "SparsePoly":
        return cls(len(exp), {tuple(exp): coef})

    # =========================================================================
    # Queries
    # =========================================================================

    @property
    def support(self) -> List[IntVec]:
        return sorted(self.terms)

    def coefficient(self, exp: Sequence[int]):
        return self.terms.get(tuple(exp), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def is_polynomial(self) -> bool:
        return all(e >= 0 for exp in self.terms for e in exp)

    def constant_term(self):
        return self.terms.get(tuple([0] * self.n), 0)

    def total_degree(self) -> int:
        return max((sum(exp) for exp in self.terms), default=0)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        for exp in sorted(self.terms):
            yield exp, self.terms[exp]

    # =========================================================================
    # Arithmetic
    # =========================================================================

    def _coerce(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            if other.n != self.n:
                raise ValueError(f"Dimension mismatch: {self.n} vs {other.n}")
            return other
        return SparsePoly.constant(self.n, other)

    def __add__(self, other) -> "SparsePoly":
        other = self._coerce(other)
        merged = dict(self.terms)
        for exp, coef in other.terms.items():
            merged[exp] = merged.get(exp, 0) + coef
        return SparsePoly(self.n, merged)

    __radd__ = __add__

    def __neg__(self) -> "SparsePoly":
        return SparsePoly(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "SparsePoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "SparsePoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "SparsePoly":
        if not isinstance(other, SparsePoly):
            return SparsePoly(self.n, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        product: Dict[IntVec, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = vec_add(e1, e2)
                product[key] = product.get(key, 0) + c1 * c2
        return SparsePoly(self.n, product)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "SparsePoly":
        if k < 0:
            if len(self.terms) != 1:
                raise ValueError("Only monomials can be raised to negative powers")
            (exp, coef), = self.terms.items()
            inverse = Fraction(1, coef) if isinstance(coef, int) else 1 / coef
            return SparsePoly(self.n, {tuple(k * e for e in exp): inverse ** (-k)})
        result = SparsePoly.constant(self.n, Fraction(1))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, tuple(sorted(self.terms.items()))))

    # =========================================================================
    # Transformations
    # =========================================================================

    def map_coefficients(self, fn: Callable) -> "SparsePoly":
        return SparsePoly(self.n, {e: fn(c) for e, c in self.terms.items()})

    def restrict(self, keep: Callable[[IntVec], bool]) -> "SparsePoly":
        """Terms whose exponent satisfies the predicate."""
        return SparsePoly(self.n, {e: c for e, c in self.terms.items() if keep(e)})

    def project(self, coords: Sequence[int]) -> "SparsePoly":
        """Drop every variable outside coords; they must not occur."""
        coords = list(coords)
        dropped = [i for i in range(self.n) if i not in coords]
        projected = {}
        for exp, coef in self.terms.items():
            if any(exp[i] != 0 for i in dropped):
                raise ValueError(f"Term with exponent {exp} depends on dropped variables {dropped}")
            projected[tuple(exp[i] for i in coords)] = coef
        return SparsePoly(len(coords), projected)

    def embed(self, n: int, coords: Sequence[int]) -> "SparsePoly":
        """Inverse of project: place the variables at the given coordinates of an n-space."""
        placed = {}
        for exp, coef in self.terms.items():
            full = [0] * n
            for i, e in zip(coords, exp):
                full[i] = e
            placed[tuple(full)] = coef
        return SparsePoly(n, placed)

    def derivative(self, j: int) -> "SparsePoly":
        out = {}
        for exp, coef in self.terms.items():
            if exp[j] == 0:
                continue
            lowered = list(exp)
            lowered[j] -= 1
            out[tuple(lowered)] = coef * exp[j]
        return SparsePoly(self.n, out)

    def evaluate(self, point: Sequence, convert: Optional[Callable] = None):
        """Evaluate at a point; convert maps each coefficient into the point's number type."""
        total = 0
        for exp, coef in self.terms.items():
            term = convert(coef) if convert else coef
            for x, e in zip(point, exp):
                if e:
                    term = term * x ** e
            total = total + term
        return total

    def __call__(self, *point):
        return self.evaluate(point)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp, coef in sorted(self.terms.items(), reverse=True):
            mono = "*".join(
                f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}" for i, e in enumerate(exp) if e
            )
            parts.append(f"({coef})*{mono}" if mono else f"({coef})")
        return " + ".join(parts)


def substitute_monomial(f: SparsePoly, w: Sequence[Sequence[int]]) -> SparsePoly:
    """Apply x = u^W, i.e. x^alpha -> u^(alpha W).

    Raises:
        NotUnimodular: If W is not a unimodular n x n matrix.
    """
    w = as_intmat(w)
    if len(w) != f.n or not is_unimodular(w):
        raise NotUnimodular(f"Substitution matrix must be unimodular of size {f.n}")
    return SparsePoly(f.n, {vec_mat(exp, w): coef for exp, coef in f.terms.items()})


def log_gradient(g: SparsePoly) -> List[SparsePoly]:
    """Components u_j dg/du_j."""
    return [
        SparsePoly(g.n, {exp: coef * exp[j] for exp, coef in g.terms.items() if exp[j]})
        for j in range(g.n)
    ]
