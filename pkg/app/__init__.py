"""
ACV - Asymptotic Critical Values
Bad faces of Newton polyhedra, candidate values and witness curves.
"""

__version__ = "0.1.0"
