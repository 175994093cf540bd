"""
Parser modules for problem files.
"""

from .problem_parser import dump_problem, load_chart_file, load_problem, parse_problem

__all__ = ["dump_problem", "load_chart_file", "load_problem", "parse_problem"]
