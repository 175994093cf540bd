"""Sparse Laurent polynomials and local jets."""

from app.laurent.jets import JetSeries, local_expand, mu_pair_jets, mu_pairings
from app.laurent.sparse import SparsePoly, log_gradient, substitute_monomial

__all__ = [
    "JetSeries",
    "SparsePoly",
    "local_expand",
    "log_gradient",
    "mu_pair_jets",
    "mu_pairings",
    "substitute_monomial",
]
