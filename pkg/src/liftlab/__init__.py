"""Exact slack matrices, nonnegative factorizations and the protocols behind them.

Covers the permutahedron (via sorting networks and the Goemans lift), the
spanning-tree polytope and the matching polytope, with exact rational
verification throughout.
"""
from .exactnum import RatMatrix, mat_mul_eq
from .protocol import (Factorization, MarkovianProtocol, check_correct, compile_factorization,
                       exact_expectation, factorization_to_protocol, simulate)
from .slack import slack_match, slack_perm, slack_spt

__all__ = [
    "Factorization", "MarkovianProtocol", "RatMatrix", "check_correct",
    "compile_factorization", "exact_expectation", "factorization_to_protocol",
    "mat_mul_eq", "simulate", "slack_match", "slack_perm", "slack_spt",
]
__version__ = "0.1.0"
