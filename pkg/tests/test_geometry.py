"""
Tests for exact affine computations and convexity-defect scenes
"""

import random

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from colorank.core.errors import DegenerateError, PreconditionError
from colorank.core.generators import random_pair_coloring
from colorank.geometry.linalg import (
    affine_det,
    affinely_independent,
    barycentric,
    conv_membership,
    rational_point,
    relint_disjoint,
    relint_membership,
)
from colorank.geometry.scene import (
    Scene,
    check_defect,
    defect_sweep,
    parameter,
    point_of,
    realize,
    removed_points,
    verify_general_position,
)

TRIANGLE = [rational_point(p) for p in [(0, 0), (1, 0), (0, 1)]]


def segment(a, b):
    return [rational_point(a), rational_point(b)]


def test_barycentric_coordinates():
    inside = rational_point((sp.Rational(1, 4), sp.Rational(1, 4)))
    assert barycentric(inside, TRIANGLE) == [sp.Rational(1, 2), sp.Rational(1, 4), sp.Rational(1, 4)]
    assert relint_membership(inside, TRIANGLE)
    edge = rational_point((sp.Rational(1, 2), 0))
    assert conv_membership(edge, TRIANGLE)
    assert not relint_membership(edge, TRIANGLE)
    assert not conv_membership(rational_point((1, 1)), TRIANGLE)
    assert barycentric(rational_point((0, 1)), segment((0, 0), (1, 0))) is None


def test_degenerate_simplices_are_rejected():
    collinear = [rational_point(p) for p in [(0, 0), (1, 1), (2, 2)]]
    assert not affinely_independent(collinear)
    with pytest.raises(DegenerateError):
        barycentric(rational_point((0, 0)), collinear)
    with pytest.raises(DegenerateError):
        affine_det(segment((0, 0), (1, 0)))
    assert affine_det(TRIANGLE) == 1


def test_relative_interiors():
    assert not relint_disjoint(segment((0, 0), (2, 2)), segment((0, 2), (2, 0)))
    assert relint_disjoint(segment((0, 0), (1, 0)), segment((0, 1), (1, 1)))
    assert relint_disjoint(segment((0, 0), (1, 0)), segment((0, 0), (0, 1)))
    assert not relint_disjoint(segment((0, 0), (2, 0)), segment((1, 0), (3, 0)))
    assert relint_disjoint(segment((0, 0), (1, 0)), segment((1, 0), (2, 0)))


def test_moment_curve_points():
    assert parameter((1,)) == sp.Rational(1, 3)
    assert parameter((0, 1)) == sp.Rational(1, 9)
    assert parameter(()) == 0
    assert point_of((1,), 2) == (sp.Rational(1, 3), sp.Rational(1, 9), sp.Rational(1, 27))


def test_realized_scene_defects_exactly_the_colored_pairs():
    coloring = [[((0, 0), (1, 1))], [((0, 1), (1, 0))]]
    scene = realize(coloring, 2, 2, mmax=4)
    assert len(scene.points) == 4
    assert scene.dimension == 3
    assert check_defect(scene, [(0, 0), (1, 1)])
    assert check_defect(scene, [(1, 0), (0, 1)])
    assert not check_defect(scene, [(0, 0), (0, 1)])
    report = defect_sweep(scene)
    assert report.ok, report.summary()
    assert verify_general_position(scene).ok


def test_removed_points_move_toward_the_centroid():
    scene = realize([[((0, 0), (1, 1))], [((0, 0), (1, 1))]], 2, 2, mmax=4)
    (centre,) = removed_points(scene, 0)
    assert centre[0] == centre[1]
    (pulled,) = removed_points(scene, 1)
    a, b = scene.simplex([(0, 0), (1, 1)])
    assert pulled[0] == tuple((3 * x + y) / 4 for x, y in zip(a, b))
    with pytest.raises(PreconditionError):
        removed_points(scene, 2)


def test_realize_rejects_bad_colorings():
    with pytest.raises(PreconditionError):
        realize([set(), set()], 2, 2, mmax=1)
    with pytest.raises(PreconditionError):
        realize([[((0, 0), (0, 0))]], 2, 2, mmax=4)
    with pytest.raises(PreconditionError):
        realize([[((0, 0), (1, 2))]], 2, 2, mmax=4)
    with pytest.raises(PreconditionError):
        realize([], 1, 2, mmax=4)


def test_unknown_strings_are_rejected():
    scene = realize([], 2, 2, mmax=4)
    with pytest.raises(PreconditionError):
        check_defect(scene, [(0, 0), (1, 1, 1)])


def test_coplanar_points_fail_general_position():
    points = {
        (0, 0): rational_point((0, 0, 0)),
        (0, 1): rational_point((1, 0, 0)),
        (1, 0): rational_point((0, 1, 0)),
        (1, 1): rational_point((1, 1, 0)),
    }
    scene = Scene(arity=2, height=2, points=points)
    assert verify_general_position(scene).kinds() == ["general-position"]


BITS3 = st.tuples(st.integers(0, 1), st.integers(0, 1), st.integers(0, 1))


@pytest.mark.property_based
@given(st.lists(BITS3, min_size=4, max_size=4, unique=True))
@settings(max_examples=30, deadline=None)
def test_moment_curve_points_are_in_general_position(strings):
    assert affine_det([point_of(s, 2) for s in strings]) != 0


@pytest.mark.property_based
@given(st.lists(BITS3, min_size=2, max_size=2, unique=True), st.lists(BITS3, min_size=2, max_size=2, unique=True))
@settings(max_examples=30, deadline=None)
def test_segments_with_four_distinct_endpoints_are_relint_disjoint(x0, x1):
    if set(x0) & set(x1):
        return
    assert relint_disjoint([point_of(s, 2) for s in x0], [point_of(s, 2) for s in x1])


@pytest.mark.slow
def test_random_colorings_are_realized_on_every_pair():
    rng = random.Random(7)
    for _ in range(10):
        coloring = random_pair_coloring(rng, 5, pairs=20, mmax=4)
        scene = realize(coloring, 2, 5, mmax=4)
        assert len(scene.points) == 32
        report = defect_sweep(scene)
        assert report.ok, report.summary()
        assert report.notes[-1].startswith("496 subsets checked")
