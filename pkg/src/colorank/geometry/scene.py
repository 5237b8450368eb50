"""
Colorank Scenes - Exact realization of finite colorings as convexity defects
"""

import itertools
import logging
import random
from dataclasses import dataclass, field
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import sympy as sp

from ..core.errors import ConsistencyError, PreconditionError
from ..core.report import ValidationReport
from ..core.sequences import Seq, encode_bits
from .linalg import Point, affine_det, conv_membership, relint_disjoint, relint_membership

logger = logging.getLogger(__name__)

Simplex = Tuple[Seq, ...]


def parameter(s: Seq) -> sp.Rational:
    """Middle-thirds parameter sum(s_i * 3^-(i+1))"""
    return sum((sp.Rational(bit, 3 ** (i + 1)) for i, bit in enumerate(s)), sp.Integer(0))


def moment_point(t: sp.Rational, dimension: int) -> Point:
    return tuple(t ** k for k in range(1, dimension + 1))


def point_of(s: Seq, arity: int) -> Point:
    """Point of string s on the moment curve in dimension 2N-1"""
    return moment_point(parameter(s), 2 * arity - 1)


def centroid(points: Sequence[Point]) -> Point:
    return tuple(sum(coords, sp.Integer(0)) / len(points) for coords in zip(*points))


@dataclass
class Scene:
    """Points of X with the removed tuples of every realized layer"""

    arity: int
    height: int
    points: Dict[Seq, Point] = field(default_factory=dict)
    coloring: List[Set[Simplex]] = field(default_factory=list)
    removed: Dict[int, List[Tuple[Point, ...]]] = field(default_factory=dict)

    @property
    def dimension(self) -> int:
        return 2 * self.arity - 1

    def simplex(self, T: Iterable[Seq]) -> List[Point]:
        return [self.points[s] for s in sorted(T)]

    def colored(self) -> Set[Simplex]:
        return {x for layer in self.coloring for x in layer}

    def removed_all(self) -> List[Point]:
        return [p for tuples in self.removed.values() for b in tuples for p in b]


def removed_points(scene: Scene, m: int) -> List[Tuple[Point, ...]]:
    """Tuples b_m(x) for x in C_m: each vertex pulled toward the centroid by 1/(m+1)"""
    if not 0 <= m < len(scene.coloring):
        raise PreconditionError(f"layer {m} is not realized")
    mu = sp.Rational(1, m + 1)
    result = []
    for x in sorted(scene.coloring[m]):
        vertices = scene.simplex(x)
        c = centroid(vertices)
        result.append(tuple(
            tuple((1 - mu) * a + mu * b for a, b in zip(vertex, c)) for vertex in vertices
        ))
    return result


def verify_general_position(scene: Scene, sample_cap: int = 50_000,
                            rng: Optional[random.Random] = None) -> ValidationReport:
    """Affine independence of every 2N points, exhaustive below the sample cap.

    Above the cap the distinct moment-curve parameters certify independence
    (Vandermonde) and a seeded sample of determinants is still checked.
    """
    report = ValidationReport(subject="general position")
    strings = sorted(scene.points)
    size = 2 * scene.arity
    if len(strings) < size:
        report.notes.append(f"fewer than {size} points")
        return report
    total = comb(len(strings), size)
    if total <= sample_cap:
        subsets: Iterable[Tuple[Seq, ...]] = itertools.combinations(strings, size)
        report.notes.append(f"exhaustive: {total} determinants")
    else:
        rng = rng or random.Random(0)
        subsets = [tuple(sorted(rng.sample(strings, size))) for _ in range(sample_cap)]
        on_curve = all(scene.points[s] == moment_point(scene.points[s][0], scene.dimension) for s in strings)
        distinct = len({scene.points[s][0] for s in strings}) == len(strings)
        if on_curve and distinct:
            report.notes.append(f"Vandermonde certificate over {total} subsets; {sample_cap} sampled")
        else:
            report.add("general-position", "no Vandermonde certificate: points off the curve or repeated")
    for subset in subsets:
        if affine_det([scene.points[s] for s in subset]) == 0:
            report.add("general-position", "affinely dependent points",
                       witness=[encode_bits(s) for s in subset])
    return report


def check_defect(scene: Scene, T: Iterable[Seq]) -> bool:
    """True iff some removed point lies in conv T"""
    T = sorted(T)
    missing = [s for s in T if s not in scene.points]
    if missing:
        raise PreconditionError(f"string {encode_bits(missing[0])} is not a point of the scene")
    vertices = scene.simplex(T)
    return any(conv_membership(p, vertices) for p in scene.removed_all())


def defect_sweep(scene: Scene, sample_cap: int = 50_000, rng: Optional[random.Random] = None) -> ValidationReport:
    """Compare check_defect with coloring membership over the N-subsets of X"""
    report = ValidationReport(subject="defect sweep")
    colored = scene.colored()
    strings = sorted(scene.points)
    total = comb(len(strings), scene.arity)
    if total <= sample_cap:
        subsets: Iterable[Simplex] = itertools.combinations(strings, scene.arity)
    else:
        rng = rng or random.Random(0)
        subsets = sorted(colored) + [tuple(sorted(rng.sample(strings, scene.arity))) for _ in range(sample_cap)]
        report.notes.append(f"sampled {sample_cap} of {total} subsets plus every colored one")
    checked = defects = 0
    for T in subsets:
        checked += 1
        found = check_defect(scene, T)
        defects += found
        if found != (tuple(T) in colored):
            report.add("defect", f"defect {found} but colored {tuple(T) in colored}",
                       witness=[encode_bits(s) for s in T])
    report.notes.append(f"{checked} subsets checked, {defects} defected")
    return report


def _check_coloring(coloring: Sequence[Iterable[Sequence[int]]], arity: int, height: int) -> List[Set[Simplex]]:
    layers = []
    for m, layer in enumerate(coloring):
        normalized: Set[Simplex] = set()
        for x in layer:
            x = tuple(sorted(tuple(s) for s in x))
            if len(set(x)) != arity:
                raise PreconditionError(f"C_{m} holds a set of {len(set(x))} strings, expected {arity}")
            if any(len(s) != height or any(b not in (0, 1) for b in s) for s in x):
                raise PreconditionError(f"C_{m} holds a string that is not binary of length {height}")
            normalized.add(x)
        layers.append(normalized)
    return layers


def realize(coloring: Sequence[Iterable[Sequence[int]]], arity: int, height: int, mmax: int,
            sample_cap: int = 50_000) -> Scene:
    """Scene whose defected N-subsets of X are exactly the colored ones.

    Args:
        coloring: Layers C_0, ..., C_{M-1} of N-subsets of binary strings of length height
        arity: N, at least 2
        height: String length
        mmax: Largest number of layers accepted
        sample_cap: Exhaustive-check limit for the certificates

    Returns:
        Certified scene

    Raises:
        PreconditionError: malformed coloring or too many layers
        ConsistencyError: a certificate failed
    """
    if arity < 2:
        raise PreconditionError("N must be at least 2")
    if len(coloring) > mmax:
        raise PreconditionError(f"{len(coloring)} layers exceed M_max = {mmax}")
    layers = _check_coloring(coloring, arity, height)
    scene = Scene(arity=arity, height=height, coloring=layers)
    for bits in itertools.product((0, 1), repeat=height):
        scene.points[bits] = point_of(bits, arity)
    for m in range(len(layers)):
        scene.removed[m] = removed_points(scene, m)
        for x, b in zip(sorted(layers[m]), scene.removed[m]):
            if not all(relint_membership(p, scene.simplex(x)) for p in b):
                raise ConsistencyError(f"removed point outside the relative interior of C_{m} simplex")
    position = verify_general_position(scene, sample_cap)
    if not position.ok:
        raise ConsistencyError(position.summary())
    used = sorted(scene.colored())
    for x0, x1 in itertools.combinations(used, 2):
        if not relint_disjoint(scene.simplex(x0), scene.simplex(x1)):
            raise ConsistencyError(f"relative interiors meet for {x0} and {x1}")
    logger.info(f"Realized {len(scene.points)} points, {sum(len(r) for r in scene.removed.values())} removed tuples")
    return scene
