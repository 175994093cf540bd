"""
Reference problems with known bad faces, charts and asymptotic critical values.
Used by the problem generator script and the golden tests.
"""

from fractions import Fraction
from typing import Dict, List, Sequence

from app.laurent.sparse import SparsePoly
from app.lattice.integer import vec_add, vec_scale
from app.orchestrator.state import ProblemSpec, Term

# =============================================================================
# Charts
# =============================================================================

CHARTS: Dict[str, List[List[int]]] = {
    "planar_face": [[0, 1, -1], [-1, 1, 0], [2, -3, 2]],
    "ray_face": [[1, 0, 1], [-2, -1, -1], [2, 2, 1]],
    "root_family": [[-1, 0, 1], [0, -1, -1], [2, 2, 1]],
    "five_variable": [
        [-1, 1, -2, 2, 1],
        [-1, -1, 0, -1, 1],
        [-1, 0, -4, 1, -1],
        [5, 1, 11, -2, 1],
        [1, 0, 3, -1, 0],
    ],
}


def _mono(exp: Sequence[int], coef=1) -> SparsePoly:
    return SparsePoly.monomial(tuple(exp), Fraction(coef))


def to_spec(f: SparsePoly, charts: List[List[List[int]]] = None, **extra) -> ProblemSpec:
    """ProblemSpec with canonical coefficient strings, terms sorted by exponent."""
    terms = [Term(coef=str(Fraction(c)), exp=list(e)) for e, c in sorted(f.terms.items())]
    return ProblemSpec(n=f.n, terms=terms, charts=charts, **extra)


# =============================================================================
# Problems
# =============================================================================

def planar_face_polynomial() -> SparsePoly:
    """x^v1 + s^2 + s^3 + x^v4 - 2 with s = x^v2 - x^v3 + 1 (the constants cancel)."""
    v1, v2, v3, v4 = (2, 1, 1), (2, 2, 1), (1, 2, 1), (3, 1, 1)
    s = _mono(v2) - _mono(v3) + SparsePoly.constant(3, Fraction(1))
    return _mono(v1) + s ** 2 + s ** 3 + _mono(v4) - SparsePoly.constant(3, Fraction(2))


def ray_face_polynomial() -> SparsePoly:
    """-3 x^v0 + x^v1 + x^v2 + x^{3 v0}."""
    v0, v1, v2 = (2, 2, 1), (1, 0, 1), (0, 1, 1)
    return _mono(v0, -3) + _mono(v1) + _mono(v2) + _mono(vec_scale(3, v0))


def root_family_polynomial(
    roots: Sequence[int] = (1, 2),
    multiplicities: Sequence[int] = (3, 1),
    weights: Sequence[int] = (1, 1, 1),
) -> SparsePoly:
    """prod (x^v0 - z_j)^{m_j} + b1 x^v1 + b2 x^v2 + b3 x^v3 - prod (-z_j)^{m_j}.

    The subtracted constant removes the constant term of the product.
    """
    if len(roots) != len(multiplicities):
        raise ValueError("Each root needs a multiplicity")
    if any(m < 1 for m in multiplicities) or len(set(roots)) != len(roots) or 0 in roots:
        raise ValueError("Roots must be distinct and nonzero with positive multiplicities")
    v0, v1, v2, v3 = (2, 2, 1), (0, 1, 1), (1, 0, 1), (1, 1, 3)
    product = SparsePoly.constant(3, Fraction(1))
    shift = Fraction(1)
    for z, m in zip(roots, multiplicities):
        product = product * (_mono(v0) - SparsePoly.constant(3, Fraction(z))) ** m
        shift *= Fraction(-z) ** m
    f = product + _mono(v1, weights[0]) + _mono(v2, weights[1]) + _mono(v3, weights[2])
    return f - SparsePoly.constant(3, shift)


def root_family_value(roots: Sequence[int] = (1, 2), multiplicities: Sequence[int] = (3, 1)) -> Fraction:
    """Critical value -prod (-z_j)^{m_j} at the roots of multiplicity >= 2."""
    value = Fraction(1)
    for z, m in zip(roots, multiplicities):
        value *= Fraction(-z) ** m
    return -value


def five_variable_polynomial() -> SparsePoly:
    """-3 x^v0 + x^{3 v0} + sum_i x^{v_i + v0} with v0 = (1,2,3,1,1) and v_i in the last-coordinate-zero slice."""
    v0 = (1, 2, 3, 1, 1)
    shifts = [(3, 3, 4, 2, 0), (1, 3, 5, 2, 0), (3, 1, 4, 2, 0), (1, 1, 1, 1, 0), (4, 4, 10, 7, 0)]
    f = _mono(v0, -3) + _mono(vec_scale(3, v0))
    for v in shifts:
        f = f + _mono(vec_add(v, v0))
    return f


CATALOG = {
    "planar_face": planar_face_polynomial,
    "ray_face": ray_face_polynomial,
    "root_family": root_family_polynomial,
    "five_variable": five_variable_polynomial,
}


def reference_problem(name: str, **extra) -> ProblemSpec:
    """Catalog problem with its reference chart as the user chart of the first bad face."""
    if name not in CATALOG:
        raise KeyError(f"Unknown reference problem {name!r}; choose from {sorted(CATALOG)}")
    return to_spec(CATALOG[name](), charts=[CHARTS[name]], **extra)
