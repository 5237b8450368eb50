"""
Colorank - Ranked coloring trees and their applications

Rank analysis of finite coloring trees, universal gamma-ranked trees,
generic homogeneous families over finite models, and exact realizations
of colorings as convexity defects.
"""

__version__ = "1.0.0"

from .core.ordinal import OrdinalCNF, ord_parse
from .forcing.homogeneous import generic_homogeneous, verify_domination
from .geometry.scene import realize
from .model.rank import oracle_from_model
from .trees.rank import rank_all
from .universal.builder import build_universal

__all__ = [
    "OrdinalCNF",
    "ord_parse",
    "generic_homogeneous",
    "verify_domination",
    "realize",
    "oracle_from_model",
    "rank_all",
    "build_universal",
]
