"""
Colorank Trees - Coloring trees, approximations and their ranks
"""

from .approximation import Approximation, approx_from_family, approx_leq, approximations
from .basic import (
    BasicColoringTree,
    BasicNode,
    basic_from_closed,
    basic_to_general,
    induced_pairs,
    validate_basic,
)
from .chain import ChainResult, extract_splitting_chain
from .coloring_tree import ColoringTree, TreeNode, validate_tree
from .rank import RankEngine, RankReport, rank_all, rank_oracle
from .ranked import RankedTree, check_rank_bound, derive_ranked, validate_ranked

__all__ = [
    "Approximation",
    "approx_from_family",
    "approx_leq",
    "approximations",
    "BasicColoringTree",
    "BasicNode",
    "basic_from_closed",
    "basic_to_general",
    "induced_pairs",
    "validate_basic",
    "ChainResult",
    "extract_splitting_chain",
    "ColoringTree",
    "TreeNode",
    "validate_tree",
    "RankEngine",
    "RankReport",
    "rank_all",
    "rank_oracle",
    "RankedTree",
    "check_rank_bound",
    "derive_ranked",
    "validate_ranked",
]
