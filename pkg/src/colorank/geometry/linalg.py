"""
Colorank Exact Linear Algebra - Rational affine computations and the relative-interior LP
"""

import logging
from typing import List, Optional, Sequence, Tuple

import sympy as sp
from sympy.solvers.simplex import InfeasibleLPError, lpmax

from ..core.errors import DegenerateError

logger = logging.getLogger(__name__)

Point = Tuple[sp.Rational, ...]


def rational_point(coords: Sequence) -> Point:
    return tuple(sp.Rational(x) for x in coords)


def affine_rows(points: Sequence[Point]) -> sp.Matrix:
    """Rows (1, p) for each point"""
    return sp.Matrix([[1, *p] for p in points])


def affine_det(points: Sequence[Point]) -> sp.Rational:
    """Determinant of the square matrix of rows (1, p); needs dim + 1 points"""
    M = affine_rows(points)
    if M.rows != M.cols:
        raise DegenerateError(f"{M.rows} points in dimension {M.cols - 1} give no square determinant")
    return M.det(method="bareiss")


def affinely_independent(points: Sequence[Point]) -> bool:
    if not points:
        return True
    return affine_rows(points).rank() == len(points)


def _hull_system(b: Point, T: Sequence[Point]) -> sp.Matrix:
    """Augmented system sum(l_i * T_i) = b, sum(l_i) = 1"""
    rows = [[p[d] for p in T] + [b[d]] for d in range(len(b))]
    rows.append([1] * len(T) + [1])
    return sp.Matrix(rows)


def barycentric(b: Point, T: Sequence[Point]) -> Optional[List[sp.Rational]]:
    """Affine coordinates of b with respect to T, None off the affine hull.

    Args:
        b: Point
        T: Affinely independent points of the same dimension

    Returns:
        Coefficients summing to 1, or None

    Raises:
        DegenerateError: T is affinely dependent
    """
    if not affinely_independent(T):
        raise DegenerateError("simplex vertices are affinely dependent")
    reduced, pivots = _hull_system(b, T).rref()
    if len(T) in pivots:
        return None
    return [reduced[i, len(T)] for i in range(len(T))]


def conv_membership(b: Point, T: Sequence[Point]) -> bool:
    coefficients = barycentric(b, T)
    return coefficients is not None and all(c >= 0 for c in coefficients)


def relint_membership(b: Point, T: Sequence[Point]) -> bool:
    coefficients = barycentric(b, T)
    return coefficients is not None and all(c > 0 for c in coefficients)


def relint_disjoint(x0: Sequence[Point], x1: Sequence[Point]) -> bool:
    """True iff the relative interiors of the two simplices do not meet.

    Maximizes tau subject to sum(l_i a_i) = sum(m_j b_j), sum(l) = sum(m) = 1,
    l_i, m_j >= tau and tau <= 1; the interiors meet iff the optimum is positive.
    """
    if not affinely_independent(x0) or not affinely_independent(x1):
        raise DegenerateError("simplex vertices are affinely dependent")
    lam = sp.symbols(f"l0:{len(x0)}")
    mu = sp.symbols(f"m0:{len(x1)}")
    tau = sp.Symbol("tau")
    dimension = len(x0[0])
    expressions = [
        sp.expand(sum(l * a[d] for l, a in zip(lam, x0)) - sum(m * b[d] for m, b in zip(mu, x1)))
        for d in range(dimension)
    ]
    # coordinates that vanish on every vertex give no equation
    expressions = [e for e in expressions if e != 0]
    expressions += [sum(lam) - 1, sum(mu) - 1]
    equalities = [sp.Eq(e, 0) for e in expressions]
    system = sp.linear_eq_to_matrix(expressions, [*lam, *mu])
    augmented = system[0].row_join(system[1])
    reduced, pivots = augmented.rref()
    if augmented.cols - 1 in pivots:
        return True
    if len(pivots) == len(lam) + len(mu):
        solution = [reduced[i, -1] for i in range(len(pivots))]
        return min(solution) <= 0
    constraints = equalities + [v >= tau for v in (*lam, *mu)] + [tau <= 1]
    try:
        optimum, _ = lpmax(tau, constraints)
    except InfeasibleLPError:
        return True
    logger.debug(f"relint LP optimum tau = {optimum}")
    return optimum <= 0
