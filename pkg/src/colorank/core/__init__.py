"""
Colorank Core - Ordinals, sequences, errors, reports and configuration
"""

from .config import (
    Budgets,
    ColorankConfig,
    ForcingConfig,
    GeometryConfig,
    TemplateBounds,
    load_config,
)
from .errors import (
    BudgetExceeded,
    ColorankError,
    ConsistencyError,
    DegenerateError,
    NotFoundError,
    ParseError,
    PreconditionError,
)
from .ordinal import Comparison, OrdinalCNF, gamma_filtration, ord_cmp, ord_parse
from .report import Issue, ValidationReport
from .sequences import Seq, encode_seq, parse_seq

__all__ = [
    "Budgets",
    "ColorankConfig",
    "ForcingConfig",
    "GeometryConfig",
    "TemplateBounds",
    "load_config",
    "BudgetExceeded",
    "ColorankError",
    "ConsistencyError",
    "DegenerateError",
    "NotFoundError",
    "ParseError",
    "PreconditionError",
    "Comparison",
    "OrdinalCNF",
    "gamma_filtration",
    "ord_cmp",
    "ord_parse",
    "Issue",
    "ValidationReport",
    "Seq",
    "encode_seq",
    "parse_seq",
]
