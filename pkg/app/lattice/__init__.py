"""
Exact lattice arithmetic: integer vectors, determinants, unimodular completion.
"""

from .integer import IntMat, IntVec, Rat, determinant, primitive
from .unimodular import invert_unimodular, is_unimodular, unimodular_complete

__all__ = [
    "IntMat",
    "IntVec",
    "Rat",
    "determinant",
    "primitive",
    "invert_unimodular",
    "is_unimodular",
    "unimodular_complete",
]
