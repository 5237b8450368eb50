"""
Colorank Geometry - Exact moment-curve scenes and convexity defects
"""

from .linalg import (
    affine_det,
    affinely_independent,
    barycentric,
    conv_membership,
    rational_point,
    relint_disjoint,
    relint_membership,
)
from .scene import (
    Scene,
    centroid,
    check_defect,
    defect_sweep,
    parameter,
    point_of,
    realize,
    removed_points,
    verify_general_position,
)

__all__ = [
    "affine_det",
    "affinely_independent",
    "barycentric",
    "conv_membership",
    "rational_point",
    "relint_disjoint",
    "relint_membership",
    "Scene",
    "centroid",
    "check_defect",
    "defect_sweep",
    "parameter",
    "point_of",
    "realize",
    "removed_points",
    "verify_general_position",
]
