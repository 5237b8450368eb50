"""
Colorank Model - Finite models, atomic types and theta-rank oracles
"""

from .finite_model import AtomicType, FiniteModel, atomic_type, independent_theta, type_over
from .rank import (
    RankedModelOracle,
    ThetaRank,
    critical,
    oracle_from_model,
    rank_theta,
    rank_theta_model,
    validate_oracle,
)

__all__ = [
    "AtomicType",
    "FiniteModel",
    "atomic_type",
    "independent_theta",
    "type_over",
    "RankedModelOracle",
    "ThetaRank",
    "critical",
    "oracle_from_model",
    "rank_theta",
    "rank_theta_model",
    "validate_oracle",
]
