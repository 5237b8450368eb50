"""
Colorank Forcing - Conditions, density, amalgamation and generic homogeneous families
"""

from .condition import ForcingCondition, cond_leq, validate_condition
from .homogeneous import FamilyResult, generic_homogeneous, verify_domination
from .poset import (
    adjoin_template,
    amalgamate,
    amalgamation_template,
    amalgamation_templates,
    check_amalgamation,
    delta_system,
    extend_into_dense,
    forcing_templates,
    forcing_universal,
    zero_step,
)

__all__ = [
    "ForcingCondition",
    "cond_leq",
    "validate_condition",
    "FamilyResult",
    "generic_homogeneous",
    "verify_domination",
    "adjoin_template",
    "amalgamate",
    "amalgamation_template",
    "amalgamation_templates",
    "check_amalgamation",
    "delta_system",
    "extend_into_dense",
    "forcing_templates",
    "forcing_universal",
    "zero_step",
]
