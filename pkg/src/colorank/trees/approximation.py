"""
Colorank Approximations - Finite sets of same-level points with node witnesses
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from ..core.errors import BudgetExceeded, PreconditionError
from ..core.sequences import Seq, encode_seq
from .coloring_tree import Label, LevelledTree, Subset, label_leq

logger = logging.getLogger(__name__)

DEFAULT_CAP = 6
DEFAULT_BUDGET = 1_000_000


@dataclass(frozen=True)
class Approximation:
    """A pair (v, h) at one level.

    v is stored sorted; h is a sorted tuple of (N-subset, label) entries so
    that equal approximations compare and hash equal.
    """

    level: int
    v: Tuple[Seq, ...]
    h: Tuple[Tuple[Subset, Label], ...]

    @classmethod
    def build(cls, level: int, v: Iterable[Seq], h: Mapping[Subset, Label]) -> "Approximation":
        members = tuple(sorted(set(v)))
        entries = tuple(sorted((tuple(sorted(u)), label) for u, label in h.items()))
        return cls(level, members, entries)

    @property
    def size(self) -> int:
        return len(self.v)

    def h_map(self) -> Dict[Subset, Label]:
        return dict(self.h)

    def label(self, subset: Iterable[Seq]) -> Label:
        key = tuple(sorted(subset))
        for u, label in self.h:
            if u == key:
                return label
        raise KeyError(key)

    def sub(self, members: Iterable[Seq]) -> "Approximation":
        """Restriction of the approximation to a subset of v"""
        keep = set(members)
        return Approximation(
            self.level,
            tuple(s for s in self.v if s in keep),
            tuple((u, label) for u, label in self.h if keep.issuperset(u)),
        )

    def extensions_of(self, p: Seq) -> List[Seq]:
        n = len(p)
        return [s for s in self.v if s[:n] == p]

    def is_basic(self) -> bool:
        return bool(self.h) and isinstance(self.h[0][1], int)

    def key(self) -> str:
        """Canonical text key: `[a,b|a,b:t;...]`, colors as `[a,b|a;b:k,...]`"""
        members = ",".join(encode_seq(s) for s in self.v)
        if self.is_basic():
            entries = ",".join(
                f"{';'.join(encode_seq(s) for s in u)}:{label}" for u, label in self.h
            )
        else:
            entries = ";".join(
                f"{','.join(encode_seq(s) for s in u)}:{encode_seq(label)}" for u, label in self.h
            )
        return f"[{members}|{entries}]"

    def __str__(self) -> str:
        return f"L{self.level}{self.key()}"


def approximations(tree: LevelledTree, n: int, cap: int = DEFAULT_CAP,
                   budget: int = DEFAULT_BUDGET) -> List[Approximation]:
    """All approximations of the tree at level n with N <= |v| <= cap.

    Args:
        tree: Host tree
        n: Level
        cap: Largest |v| enumerated
        budget: Guard on the number of approximations produced

    Returns:
        Approximations in canonical order
    """
    if cap < tree.arity:
        raise PreconditionError(f"approximation cap {cap} is below arity {tree.arity}")
    if not tree.min_level <= n < tree.height:
        raise PreconditionError(f"level {n} outside [{tree.min_level}, {tree.height})")
    result: List[Approximation] = []
    for members in cliques(tree, n, cap):
        subsets = list(itertools.combinations(members, tree.arity))
        options = [sorted(tree.labels(n, u), key=_label_sort_key) for u in subsets]
        for choice in itertools.product(*options):
            result.append(Approximation(n, members, tuple(zip(subsets, choice))))
            if len(result) > budget:
                raise BudgetExceeded(f"approximations at level {n}", budget)
    logger.debug(f"level {n}: {len(result)} approximations (cap {cap})")
    return result


def cliques(tree: LevelledTree, n: int, cap: int) -> Iterator[Tuple[Seq, ...]]:
    """Sorted point sets of size N..cap whose N-subsets all carry a label"""
    points = tree.points(n)
    arity = tree.arity

    def extend(current: Tuple[Seq, ...], start: int) -> Iterator[Tuple[Seq, ...]]:
        if len(current) >= arity:
            yield current
        if len(current) == cap:
            return
        for index in range(start, len(points)):
            candidate = points[index]
            if len(current) >= arity - 1:
                fits = all(
                    tree.labels(n, rest + (candidate,))
                    for rest in itertools.combinations(current, arity - 1)
                )
                if not fits:
                    continue
            yield from extend(current + (candidate,), index + 1)

    yield from extend((), 0)


def _label_sort_key(label: Label):
    return (0, label, ()) if isinstance(label, int) else (1, 0, label)


def splits(p: Seq, b: Approximation) -> bool:
    """p has at least two extensions in b"""
    return len(b.extensions_of(p)) >= 2


def restriction_of(v: Sequence[Seq], n: int) -> Tuple[Seq, ...]:
    return tuple(sorted({s[:n] for s in v}))


def approx_leq(a: Approximation, b: Approximation) -> bool:
    """Strict order a < b on approximations of one tree"""
    if a.level >= b.level:
        return False
    if restriction_of(b.v, a.level) != a.v:
        return False
    return h_compatible(a, b)


def h_compatible(a: Approximation, b: Approximation) -> bool:
    """Labels of b extend labels of a on injectively restricting subsets"""
    if not b.h:
        return True
    arity = len(b.h[0][0])
    lower = a.h_map()
    for u_upper, label in b.h:
        u_lower = tuple(sorted(s[: a.level] for s in u_upper))
        if len(set(u_lower)) < arity:
            continue
        if not label_leq(lower[u_lower], label):
            return False
    return True


def approx_from_family(tree: LevelledTree, points: Sequence[Seq], witnesses: Mapping[Subset, Label],
                       m: int) -> Approximation:
    """Approximation determined by a finite family at level m.

    Args:
        tree: Host tree
        points: Family members, all of one length D >= m
        witnesses: Label per N-subset of points (keys in any order)
        m: Level to restrict to

    Returns:
        The approximation of restricted points and restricted witnesses
    """
    lowered = [s[:m] for s in points]
    if len(set(lowered)) != len(lowered):
        raise PreconditionError(f"restriction collision at level {m}")
    if len(lowered) < tree.arity:
        raise PreconditionError("family smaller than arity")
    by_key = {tuple(sorted(u)): label for u, label in witnesses.items()}
    h: Dict[Subset, Label] = {}
    for u in itertools.combinations(points, tree.arity):
        label = by_key.get(tuple(sorted(u)))
        if label is None:
            raise PreconditionError(f"no witness for subset {u}")
        low_u = tuple(sorted(s[:m] for s in u))
        low_label = label if isinstance(label, int) else label[:m]
        if low_label not in tree.labels(m, low_u):
            raise PreconditionError(f"missing node at level {m} for {low_u}")
        h[low_u] = low_label
    return Approximation.build(m, lowered, h)
