"""
Candidate set of asymptotic critical values.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from app.charts.chart import Chart
from app.critical.solver import TorusCriticalPoint, close, face_critical_points, x_chart_values
from app.laurent.sparse import SparsePoly
from app.newton.analysis import BadFace, face_polynomial
from app.rules.tolerances import ToleranceRules

logger = logging.getLogger(__name__)


@dataclass
class CandidateValue:
    value: complex
    faces: Tuple[int, ...]


@dataclass
class CandidateSet:
    """Deduplicated critical values of the face polynomials."""
    values: List[CandidateValue] = field(default_factory=list)
    zero_marker: bool = False
    chart_independent: Optional[bool] = None

    def as_complex(self) -> List[complex]:
        return [c.value for c in self.values]

    def superset(self) -> List[complex]:
        """Values together with 0 when the non-degeneracy flag is set."""
        values = self.as_complex()
        if self.zero_marker and not any(abs(v) == 0 for v in values):
            values = sorted(values + [0j], key=lambda v: (v.real, v.imag))
        return values


def face_polynomial_in_chart(f: SparsePoly, face: BadFace, chart: Chart) -> SparsePoly:
    """f_gamma^W as a polynomial in the n - k face variables u''."""
    f_face_w = chart.transform(face_polynomial(f, face))
    return f_face_w.project(range(chart.k, chart.n))


def candidate_values(
    f: SparsePoly,
    faces: Sequence[BadFace],
    charts: Sequence[Chart],
    nondegenerate: bool = False,
    critical: Optional[Dict[int, List[TorusCriticalPoint]]] = None,
    cross_check: bool = False,
    rules: Optional[ToleranceRules] = None,
    seed: int = 0,
) -> CandidateSet:
    """Union over bad faces of the torus critical values of f_gamma^W.

    Args:
        f: The polynomial.
        faces: Bad faces.
        charts: One chart per face.
        nondegenerate: User-asserted non-degeneracy at infinity (adds the 0 marker).
        critical: Precomputed critical points per face index.
        cross_check: Also compute the values in x-coordinates and compare.
        rules: Numeric rules.
        seed: Multistart seed.

    Returns:
        CandidateSet sorted by value.
    """
    rules = rules or ToleranceRules()
    dedup = rules.get("dedup_tol")
    critical = dict(critical or {})
    merged: List[CandidateValue] = []
    independent = True if cross_check else None

    for idx, (face, chart) in enumerate(zip(faces, charts)):
        if idx not in critical:
            critical[idx] = face_critical_points(face_polynomial_in_chart(f, face, chart), rules, seed)
        face_values = [p.complex_value for p in critical[idx]]
        for value in face_values:
            for entry in merged:
                if close(entry.value, value, dedup):
                    if idx not in entry.faces:
                        entry.faces = entry.faces + (idx,)
                    break
            else:
                merged.append(CandidateValue(value=value, faces=(idx,)))

        if cross_check:
            direct = x_chart_values(face_polynomial(f, face), rules, seed)
            same = all(any(close(a, b, 1e-6) for b in direct) for a in face_values) and \
                all(any(close(a, b, 1e-6) for b in face_values) for a in direct)
            if not same:
                independent = False
                logger.warning(f"Critical values of face {idx} differ between charts: {face_values} vs {direct}")

    merged.sort(key=lambda c: (round(c.value.real, 8), round(c.value.imag, 8)))
    logger.info(f"Candidate values: {[c.value for c in merged]}{' with 0 marker' if nondegenerate else ''}")
    return CandidateSet(values=merged, zero_marker=nondegenerate, chart_independent=independent)
