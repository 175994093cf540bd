"""
Tests for the problem parser and run-time settings.
"""

import json
from fractions import Fraction
from pathlib import Path
from unittest.mock import patch

import pytest

from app.catalog import CATALOG, reference_problem
from app.errors import ConstantTermPresent, ParseError
from app.parsers.problem_parser import dump_problem, load_chart_file, load_problem, parse_problem
from app.utils.settings import load_settings

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


def problem_text(terms, n=2, **extra) -> str:
    return json.dumps({"n": n, "terms": terms, **extra}, indent=2)


class TestParseProblem:
    """Test suite for parse_problem."""

    def test_ray_face_file(self):
        """Test the shipped ray-face problem."""
        spec = load_problem(str(PROBLEMS / "ray_face.json"))
        assert spec.n == 3
        assert len(spec.terms) == 4
        assert spec.seed == 0
        f = spec.polynomial()
        assert f.coefficient((2, 2, 1)) == -3
        assert f.coefficient((6, 6, 3)) == 1
        assert spec.user_chart(0) == [[1, 0, 1], [-2, -1, -1], [2, 2, 1]]
        assert spec.user_chart(1) is None

    @pytest.mark.parametrize("name", sorted(CATALOG))
    def test_shipped_files_match_catalog(self, name):
        """Test every shipped problem file equals its catalog polynomial."""
        spec = load_problem(str(PROBLEMS / f"{name}.json"))
        assert spec.polynomial() == reference_problem(name).polynomial()

    def test_five_variable_contains_cube(self):
        """Test the term x^(3,6,9,3,3) of the five-variable problem."""
        spec = load_problem(str(PROBLEMS / "five_variable.json"))
        assert spec.polynomial().coefficient((3, 6, 9, 3, 3)) == 1
        assert spec.nondegenerate_at_infinity

    def test_rational_coefficients(self):
        """Test 'p/q' strings and integers are normalized."""
        spec = parse_problem(problem_text([{"coef": "6/4", "exp": [1, 0]}, {"coef": -2, "exp": [0, 1]}]))
        assert [t.coef for t in spec.terms] == ["3/2", "-2"]

    def test_float_rejected(self):
        """Test that floating-point coefficients are refused with their location."""
        text = problem_text([{"coef": "1", "exp": [1, 0]}, {"coef": 0.5, "exp": [0, 1]}])
        with pytest.raises(ParseError) as info:
            parse_problem(text)
        assert info.value.field == "terms[1].coef"
        assert info.value.line is not None
        assert info.value.exit_code == 2

    def test_empty_terms_rejected(self):
        """Test that an empty term list is refused."""
        with pytest.raises(ParseError):
            parse_problem(problem_text([]))

    def test_constant_term_rejected(self):
        """Test ConstantTermPresent for the zero exponent."""
        with pytest.raises(ConstantTermPresent) as info:
            parse_problem(problem_text([{"coef": "1", "exp": [1, 0]}, {"coef": "2", "exp": [0, 0]}]))
        assert info.value.exit_code == 2
        assert info.value.module == "cli-io"

    def test_negative_exponent_rejected(self):
        """Test that f must be a polynomial."""
        with pytest.raises(ParseError):
            parse_problem(problem_text([{"coef": "1", "exp": [-1, 2]}]))

    def test_wrong_exponent_length(self):
        """Test exponents of the wrong length."""
        with pytest.raises(ParseError) as info:
            parse_problem(problem_text([{"coef": "1", "exp": [1, 0, 0]}]))
        assert info.value.field == "terms[0].exp"

    def test_invalid_json(self):
        """Test that JSON errors carry a line."""
        with pytest.raises(ParseError) as info:
            parse_problem('{\n  "n": 2,\n  "terms": [\n}')
        assert info.value.line is not None

    def test_cancelling_terms(self):
        """Test that a polynomial whose terms cancel is refused."""
        with pytest.raises(ParseError):
            parse_problem(problem_text([{"coef": "1", "exp": [1, 0]}, {"coef": "-1", "exp": [1, 0]}]))

    def test_bad_chart_shape(self):
        """Test that charts must be n x n integer matrices."""
        with pytest.raises(ParseError) as info:
            parse_problem(problem_text([{"coef": "1", "exp": [1, 0]}], charts=[[[1, 0]]]))
        assert info.value.field == "charts[0]"

    def test_u_star_override(self):
        """Test complex base point strings."""
        spec = parse_problem(problem_text([{"coef": "1", "exp": [1, 0]}], u_star=["1", "2+1j"]))
        assert spec.base_point_override() == [1 + 0j, 2 + 1j]

    def test_u_star_rationals_stay_exact(self):
        """Test that p/q entries parse to exact fractions."""
        spec = parse_problem(problem_text([{"coef": "1", "exp": [1, 0]}], u_star=["-1/3", "2/3"]))
        assert spec.base_point_override() == [Fraction(-1, 3), Fraction(2, 3)]

    def test_u_star_rejects_garbage(self):
        """Test ParseError for a u_star entry that is not a number."""
        with pytest.raises(ParseError) as info:
            parse_problem(problem_text([{"coef": "1", "exp": [1, 0]}], u_star=["abc"]))
        assert info.value.field == "u_star"

    def test_dump_round_trip(self):
        """Test that the canonical dump parses back to the same problem."""
        spec = load_problem(str(PROBLEMS / "planar_face.json"))
        again = parse_problem(dump_problem(spec))
        assert again == spec

    def test_missing_file(self, tmp_path):
        """Test ParseError for a missing problem file."""
        with pytest.raises(ParseError):
            load_problem(str(tmp_path / "missing.json"))


class TestChartFile:
    """Test suite for load_chart_file."""

    def test_bare_matrix(self, tmp_path):
        """Test a bare matrix applies to the first bad face."""
        path = tmp_path / "chart.json"
        path.write_text(json.dumps([[1, 0, 1], [-2, -1, -1], [2, 2, 1]]))
        assert load_chart_file(str(path)) == [[[1, 0, 1], [-2, -1, -1], [2, 2, 1]]]

    def test_faces_document(self, tmp_path):
        """Test the per-face form."""
        path = tmp_path / "charts.json"
        path.write_text(json.dumps({"faces": [None, [[0, 1], [1, 0]]]}))
        assert load_chart_file(str(path)) == [None, [[0, 1], [1, 0]]]

    def test_invalid_chart_file(self, tmp_path):
        """Test ParseError for other documents."""
        path = tmp_path / "chart.json"
        path.write_text(json.dumps({"W": 1}))
        with pytest.raises(ParseError):
            load_chart_file(str(path))


class TestSettings:
    """Test suite for load_settings."""

    def test_defaults_from_rules(self, rules):
        """Test defaults when nothing is given."""
        with patch.dict("os.environ", {}, clear=True):
            settings = load_settings(rules=rules)
        assert settings.seed == 0
        assert settings.precision == rules.get("working_precision")
        assert settings.grid.points == rules.get("grid_points")
        assert settings.log_level == "INFO"

    def test_environment_overrides(self):
        """Test ACV_SEED and ACV_PRECISION."""
        with patch.dict("os.environ", {"ACV_SEED": "7", "ACV_PRECISION": "60"}):
            settings = load_settings()
        assert settings.seed == 7
        assert settings.precision == 60

    def test_explicit_arguments_win(self):
        """Test that explicit values beat the environment."""
        with patch.dict("os.environ", {"ACV_SEED": "7"}):
            settings = load_settings(seed=3)
        assert settings.seed == 3

    def test_invalid_grid(self):
        """Test tmin >= tmax is refused."""
        with pytest.raises(ValueError):
            load_settings(tmin=0.1, tmax=0.01)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
