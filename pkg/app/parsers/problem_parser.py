"""
Problem File Parser
Reads JSON problem files into a validated ProblemSpec.
"""

import json
import logging
import os
import re
from fractions import Fraction
from typing import Any, Optional

from pydantic import ValidationError

from app.errors import ConstantTermPresent, ParseError
from app.orchestrator.state import ProblemSpec, Term
from app.utils.numeric import parse_scalar
from app.utils.settings import GridConfig

logger = logging.getLogger(__name__)

RATIONAL = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


def _line_of(text: str, key: str, occurrence: int = 0) -> Optional[int]:
    """1-based line of the given occurrence of "key" in the text."""
    needle = f'"{key}"'
    pos = -1
    for _ in range(occurrence + 1):
        pos = text.find(needle, pos + 1)
        if pos < 0:
            return None
    return text.count("\n", 0, pos) + 1


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _parse_coefficient(raw: Any, text: str, index: int) -> str:
    field = f"terms[{index}].coef"
    line = _line_of(text, "coef", index)
    if isinstance(raw, float):
        raise ParseError(f"Floating-point coefficient {raw!r} is not allowed; use 'p/q'", line=line, field=field)
    if _is_int(raw):
        raw = str(raw)
    if not isinstance(raw, str) or not RATIONAL.match(raw):
        raise ParseError(f"Coefficient {raw!r} is not an exact rational 'p' or 'p/q'", line=line, field=field)
    try:
        value = Fraction(raw.replace(" ", ""))
    except ZeroDivisionError:
        raise ParseError(f"Coefficient {raw!r} has a zero denominator", line=line, field=field)
    return str(value)


def parse_problem(text: str) -> ProblemSpec:
    """Parse and validate a problem document.

    Args:
        text: JSON text with keys n, terms and optional charts, u_star,
            nondegenerate_at_infinity, seed and grid.

    Returns:
        ProblemSpec with canonical coefficient strings.

    Raises:
        ParseError: On malformed input (line and field attached when known).
        ConstantTermPresent: If a term has the zero exponent vector.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"Invalid JSON: {e.msg}", line=e.lineno)
    if not isinstance(doc, dict):
        raise ParseError("Problem document must be a JSON object", line=1)

    n = doc.get("n")
    if not _is_int(n) or n < 1:
        raise ParseError(f"'n' must be a positive integer, got {n!r}", line=_line_of(text, "n"), field="n")

    raw_terms = doc.get("terms")
    if not isinstance(raw_terms, list) or not raw_terms:
        raise ParseError("'terms' must be a non-empty list", line=_line_of(text, "terms"), field="terms")

    terms = []
    for i, raw in enumerate(raw_terms):
        if not isinstance(raw, dict) or "coef" not in raw or "exp" not in raw:
            raise ParseError(f"Term {i} must have 'coef' and 'exp'", line=_line_of(text, "terms"), field=f"terms[{i}]")
        coef = _parse_coefficient(raw["coef"], text, i)
        exp = raw["exp"]
        line = _line_of(text, "exp", i)
        if not isinstance(exp, list) or len(exp) != n or not all(_is_int(e) for e in exp):
            raise ParseError(f"Exponent of term {i} must be {n} integers, got {exp!r}", line=line, field=f"terms[{i}].exp")
        if any(e < 0 for e in exp):
            raise ParseError(f"Exponent {exp} of term {i} has a negative entry", line=line, field=f"terms[{i}].exp")
        if not any(exp):
            raise ConstantTermPresent(f"Term {i} is a constant; f must have no constant term",
                                      line=line, field=f"terms[{i}].exp")
        terms.append(Term(coef=coef, exp=exp))

    grid = None
    if doc.get("grid") is not None:
        try:
            grid = GridConfig(**doc["grid"])
        except (TypeError, ValidationError) as e:
            raise ParseError(f"Invalid grid: {e}", line=_line_of(text, "grid"), field="grid")

    seed = doc.get("seed")
    if seed is not None and not _is_int(seed):
        raise ParseError(f"'seed' must be an integer, got {seed!r}", line=_line_of(text, "seed"), field="seed")

    u_star = doc.get("u_star")
    if u_star is not None:
        if not isinstance(u_star, list) or not u_star:
            raise ParseError("'u_star' must be a non-empty list", line=_line_of(text, "u_star"), field="u_star")
        u_star = [str(v).replace(" ", "") for v in u_star]
        try:
            for v in u_star:
                parse_scalar(v)
        except ValueError:
            raise ParseError(f"'u_star' entries must be rationals p/q or complex literals, got {u_star!r}",
                             line=_line_of(text, "u_star"), field="u_star")

    charts = doc.get("charts")
    if charts is not None:
        if not isinstance(charts, list):
            raise ParseError("'charts' must be a list of matrices", line=_line_of(text, "charts"), field="charts")
        for i, w in enumerate(charts):
            if w is None:
                continue
            if not isinstance(w, list) or len(w) != n or not all(
                isinstance(row, list) and len(row) == n and all(_is_int(x) for x in row) for row in w
            ):
                raise ParseError(f"Chart {i} must be an {n}x{n} integer matrix",
                                 line=_line_of(text, "charts"), field=f"charts[{i}]")

    spec = ProblemSpec(
        n=n,
        terms=terms,
        charts=charts,
        u_star=u_star,
        nondegenerate_at_infinity=bool(doc.get("nondegenerate_at_infinity", False)),
        seed=seed,
        grid=grid,
    )
    if spec.polynomial().is_zero():
        raise ParseError("All terms cancel", line=_line_of(text, "terms"), field="terms")
    logger.info(f"Parsed problem: n={n}, {len(terms)} terms")
    return spec


def load_problem(path: str) -> ProblemSpec:
    """Read and parse a problem file."""
    if not os.path.exists(path):
        raise ParseError(f"Problem file not found: {path}")
    with open(path, encoding="utf-8") as handle:
        return parse_problem(handle.read())


def load_chart_file(path: str) -> list:
    """Read a chart file: {"faces": [W, ...]} or a bare matrix for the first bad face."""
    with open(path, encoding="utf-8") as handle:
        try:
            doc = json.load(handle)
        except json.JSONDecodeError as e:
            raise ParseError(f"Invalid chart file: {e.msg}", line=e.lineno, field="chart")
    if isinstance(doc, dict) and "faces" in doc:
        return doc["faces"]
    if isinstance(doc, list) and doc and all(isinstance(row, list) and all(_is_int(x) for x in row) for row in doc):
        return [doc]
    raise ParseError("Chart file must hold a matrix or {\"faces\": [...]}", field="chart")


def dump_problem(spec: ProblemSpec) -> str:
    """Canonical JSON form of a problem."""
    return spec.model_dump_json(indent=2, exclude_none=True)
