"""
Toric Charts
Builds the unimodular pair (W, M = W^-1) adapted to a bad face and checks
the (mu) condition of a leading exponent vector.
"""

import logging
from dataclasses import dataclass
from itertools import product
from typing import List, Optional, Sequence, Tuple

from app.errors import ChartInvalid, InconsistentDuality, NoPositiveCompletion, NotUnimodular
from app.laurent.sparse import SparsePoly, substitute_monomial
from app.lattice.integer import (
    IntMat,
    IntVec,
    as_intmat,
    determinant,
    dot,
    lattice_coordinates,
    rational_inverse,
    saturated_span,
    transpose,
    vec_mat,
)
from app.lattice.unimodular import invert_unimodular, unimodular_complete
from app.newton.analysis import BadFace, NewtonData, dual_face_rays
from app.polyhedra.cones import ConeRep, contains, dual_cone
from app.charts.subdivision import unimodular_subdivide
from app.rules.tolerances import ToleranceRules

logger = logging.getLogger(__name__)


# =============================================================================
# Chart
# =============================================================================

@dataclass(frozen=True)
class Chart:
    """Monomial change of variables x_i = u^{w_i} with M = W^-1.

    Indices are 0-based: w(i) is row i of W, a(j) column j of W,
    m(j) row j of M and mu(j) column j of M.
    """
    W: IntMat
    M: IntMat
    k: int
    positive: bool = False

    @classmethod
    def from_matrix(cls, w: Sequence[Sequence[int]], k: int) -> "Chart":
        w = as_intmat(w)
        m = invert_unimodular(w)
        chart = cls(W=w, M=m, k=k)
        return cls(W=w, M=m, k=k, positive=chart.dual_rows_positive())

    @property
    def n(self) -> int:
        return len(self.W)

    def w(self, i: int) -> IntVec:
        return self.W[i]

    def a(self, j: int) -> IntVec:
        return tuple(row[j] for row in self.W)

    def m(self, j: int) -> IntVec:
        return self.M[j]

    def mu(self, j: int) -> IntVec:
        return tuple(row[j] for row in self.M)

    def exponent(self, alpha: Sequence[int]) -> IntVec:
        """Image alpha·W of an exponent vector."""
        return vec_mat(alpha, self.W)

    def transform(self, f: SparsePoly) -> SparsePoly:
        return substitute_monomial(f, self.W)

    def dual_rows_positive(self) -> bool:
        return all(x > 0 for j in range(self.k, self.n) for x in self.m(j))

    def leading_exponents(self, q_prime: Sequence[int]) -> IntVec:
        """e_i = <(q', 0), w_i> for every row of W."""
        padded = tuple(q_prime) + tuple([0] * (self.n - len(q_prime)))
        return tuple(dot(padded, self.w(i)) for i in range(self.n))

    def as_lists(self) -> Tuple[List[List[int]], List[List[int]]]:
        return [list(r) for r in self.W], [list(r) for r in self.M]


# =============================================================================
# Construction
# =============================================================================

def validate_chart(chart: Chart, face: BadFace, support: Sequence[IntVec]) -> None:
    """Check the chart invariants for a bad face.

    Raises:
        ChartInvalid: On the first violated invariant.
    """
    k = chart.k
    for v in face.vertices:
        image = chart.exponent(v)
        if any(image[i] != 0 for i in range(k)):
            raise ChartInvalid(f"Columns 1..{k} of W do not vanish on face vertex {v}", vertex=v)
    for alpha in support:
        image = chart.exponent(alpha)
        if any(image[i] < 0 for i in range(k)):
            raise ChartInvalid(f"Exponent {alpha} maps to {image} with a negative entry among the first {k}",
                               exponent=alpha)
        on_face = all(image[i] == 0 for i in range(k))
        if on_face and alpha not in face.points:
            raise ChartInvalid(f"Exponent {alpha} off the face is annihilated by the first {k} columns",
                               exponent=alpha)
        if alpha in face.points and any(x < 0 for x in image):
            raise ChartInvalid(f"Face exponent {alpha} maps to {image} with a negative entry", exponent=alpha)


def _nonnegative_on_face(basis: Sequence[IntVec], face: BadFace) -> bool:
    for v in face.points:
        coords = lattice_coordinates(basis, v)
        if coords is None or any(c < 0 for c in coords):
            return False
    return True


def _face_bases(face: BadFace, n: int, bound: int, rules: ToleranceRules) -> List[List[IntVec]]:
    """Lattice bases of Z^n ∩ span(face) in which every face point has nonnegative coordinates.

    Bases come from the unimodular cones inside the dual of cone(face); for
    faces of dimension at most 2 bounded shears of those bases are added.
    """
    span = saturated_span(face.vertices, n)
    d = len(span)
    local = [tuple(int(x) for x in lattice_coordinates(span, v)) for v in face.vertices]
    dual = dual_cone(ConeRep.from_generators(local, d))
    bases: List[List[IntVec]] = []
    for cone in unimodular_subdivide(dual, rules).maximal():
        # dual basis of a unimodular cone inside the dual of cone(face)
        inverse = rational_inverse(transpose(cone.generators))
        rows = [tuple(int(x) for x in row) for row in inverse]
        bases.append([tuple(sum(c * s[j] for c, s in zip(row, span)) for j in range(n)) for row in rows])

    if d <= 2 and bases:
        seed = bases[0]
        coeff_range = range(-bound, bound + 1)
        for entries in product(coeff_range, repeat=d * d):
            t = [entries[i * d:(i + 1) * d] for i in range(d)]
            if abs(determinant(t)) != 1:
                continue
            sheared = [tuple(sum(t[i][l] * seed[l][j] for l in range(d)) for j in range(n)) for i in range(d)]
            if _nonnegative_on_face(sheared, face):
                bases.append(sheared)

    valid = []
    for basis in bases:
        if _nonnegative_on_face(basis, face) and basis not in valid:
            valid.append(basis)
    return valid


def _positive(basis: Sequence[IntVec]) -> bool:
    return all(x > 0 for b in basis for x in b)


def build_chart(
    face: BadFace,
    data: NewtonData,
    user_w: Optional[Sequence[Sequence[int]]] = None,
    require_positive: bool = True,
    rules: Optional[ToleranceRules] = None,
) -> Chart:
    """Build a chart adapted to a bad face.

    Args:
        face: The bad face.
        data: Newton data of f.
        user_w: Optional user-supplied W (validated, never altered).
        require_positive: In automatic mode, require strictly positive
            rows m_{k+1..n} of M.
        rules: Numeric rules.

    Returns:
        Chart with k = codim of the face.

    Raises:
        ChartInvalid: If the user matrix violates an invariant.
        NoPositiveCompletion: If no positive completion is found in automatic mode.
    """
    rules = rules or ToleranceRules()
    n, k = data.n, face.k

    if user_w is not None:
        try:
            chart = Chart.from_matrix(user_w, k)
        except NotUnimodular as e:
            raise ChartInvalid(f"User chart is not unimodular: {e}", matrix=user_w)
        if len(chart.W) != n:
            raise ChartInvalid(f"User chart must be {n}x{n}", matrix=user_w)
        validate_chart(chart, face, data.support)
        logger.info(f"Using user chart for {face.describe()} (dual rows positive: {chart.positive})")
        return chart

    rays = dual_face_rays(face, data.gamma_minus)
    fan = unimodular_subdivide(ConeRep.from_generators(rays, n), rules)
    leading = [list(cone.generators) for cone in fan.maximal() if len(cone.generators) == k]
    if not leading:
        raise ChartInvalid(f"No unimodular cone of dimension {k} in the dual face cone", rays=rays)

    bases = _face_bases(face, n, rules.get("completion_search_bound"), rules)
    if not bases:
        raise NoPositiveCompletion(f"No face basis with nonnegative coordinates for {face.describe()}")
    ordered = sorted(bases, key=lambda b: (not _positive(b), sum(abs(x) for row in b for x in row), b))
    basis = ordered[0]
    if require_positive and not _positive(basis):
        raise NoPositiveCompletion(
            f"No completion with strictly positive dual rows within bound "
            f"{rules.get('completion_search_bound')} for {face.describe()}",
            basis=basis,
        )

    a_cols = leading[0]
    completed = unimodular_complete(basis, n)
    w0 = invert_unimodular(completed)
    d = n - k
    y_cols = [tuple(row[j] for row in w0) for j in range(d)]
    columns = a_cols + y_cols
    w = tuple(tuple(col[i] for col in columns) for i in range(n))
    chart = Chart.from_matrix(w, k)
    validate_chart(chart, face, data.support)
    logger.info(f"Built chart for {face.describe()}: W={[list(r) for r in chart.W]}, positive={chart.positive}")
    return chart


# =============================================================================
# Condition (mu)
# =============================================================================

def check_mu_condition(chart: Chart, q_prime: Sequence[int]) -> bool:
    """(mu): some <(q', 0), w_i> < 0, equivalently (q', 0) lies outside cone(mu_1..mu_n).

    Raises:
        InconsistentDuality: If the two formulations disagree.
    """
    exponents = chart.leading_exponents(q_prime)
    by_rows = any(e < 0 for e in exponents)
    padded = tuple(q_prime) + tuple([0] * (chart.n - len(q_prime)))
    mu_cone = ConeRep.from_generators([chart.mu(j) for j in range(chart.n)], chart.n)
    by_cone = not contains(mu_cone, padded)
    if by_rows != by_cone:
        raise InconsistentDuality(
            f"(mu) tests disagree for q'={tuple(q_prime)}: rows={by_rows}, cone={by_cone}",
            exponents=exponents,
        )
    return by_rows
