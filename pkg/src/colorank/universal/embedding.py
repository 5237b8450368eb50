"""
Colorank Embeddings - Support maps between ranked trees and their search
"""

import itertools
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Set, Tuple

from ..core.errors import NotFoundError, PreconditionError
from ..core.report import ValidationReport
from ..core.sequences import Seq, encode_seq, is_prefix
from ..trees.approximation import DEFAULT_CAP, Approximation, approximations
from ..trees.ranked import RankedTree
from .template import CHILD_LEVEL, ROOT_LEVEL, root_part, template_children, template_roots

logger = logging.getLogger(__name__)


@dataclass
class Embedding:
    """Support map f with the induced color map f_star"""

    f: Dict[Seq, Seq] = field(default_factory=dict)
    f_star: Dict[int, int] = field(default_factory=dict)

    def copy(self) -> "Embedding":
        return Embedding(dict(self.f), dict(self.f_star))

    def transport(self, a: Approximation) -> Optional[Approximation]:
        """Image approximation, None when a leaves the domain"""
        if any(s not in self.f for s in a.v) or any(k not in self.f_star for _, k in a.h):
            return None
        return Approximation.build(
            len(self.f[a.v[0]]),
            [self.f[s] for s in a.v],
            {tuple(self.f[s] for s in u): self.f_star[k] for u, k in a.h},
        )

    def restricted_to(self, keep) -> "Embedding":
        keep = set(keep)
        return Embedding({s: t for s, t in self.f.items() if s in keep}, dict(self.f_star))

    def describe(self) -> List[str]:
        lines = [f"f {encode_seq(s)} {encode_seq(t)}" for s, t in sorted(self.f.items())]
        lines += [f"fstar {k} {v}" for k, v in sorted(self.f_star.items())]
        return lines


def identity_embedding(S: RankedTree) -> Embedding:
    f = {s: s for n in S.base.level_range() for s in S.support(n)}
    return Embedding(f, {k: k for k in S.base.colors()})


def validate_embedding(e: Embedding, S: RankedTree, T: RankedTree, cap: int = DEFAULT_CAP) -> ValidationReport:
    """Check injectivity, order and level preservation, colors and rank/critical coherence"""
    report = ValidationReport(subject="embedding")
    images: Dict[Seq, Seq] = {}
    for s, t in sorted(e.f.items()):
        if t in images:
            report.add("injective", f"{encode_seq(images[t])} and {encode_seq(s)} share an image",
                       witness=(images[t], s))
        images[t] = s
    color_images: Dict[int, int] = {}
    for k, j in sorted(e.f_star.items()):
        if j in color_images:
            report.add("injective", f"colors {color_images[j]} and {k} share an image", witness=(color_images[j], k))
        color_images[j] = k
    by_length: Dict[int, Set[int]] = defaultdict(set)
    for s, t in e.f.items():
        by_length[len(s)].add(len(t))
    for length, targets in sorted(by_length.items()):
        if len(targets) > 1:
            report.add("level", f"level {length} maps to levels {sorted(targets)}", witness=length)
    domain = sorted(e.f, key=len)
    for x, y in itertools.combinations(domain, 2):
        if len(x) < len(y) and is_prefix(x, y) and not is_prefix(e.f[x], e.f[y]):
            report.add("order", f"{encode_seq(x)} below {encode_seq(y)} but images are not",
                       witness=(x, y))
    levels = sorted({len(s) for s in e.f})
    for n in levels:
        if not S.base.min_level <= n < S.height:
            continue
        for node in S.base.nodes(n):
            if node.x not in e.f or node.y not in e.f:
                continue
            if node.k not in e.f_star:
                report.add("color", f"color {node.k} has no image", witness=str(node))
                continue
            fx, fy = e.f[node.x], e.f[node.y]
            if not T.base.has_node(len(fx), fx, fy, e.f_star[node.k]):
                report.add("color", f"image of {node} is not a node", witness=str(node))
        if not report.ok:
            continue
        for a in approximations(S.base, n, cap):
            moved = e.transport(a)
            if moved is None:
                continue
            if a not in S.r:
                report.add("table", "source approximation lacks r", witness=a.key())
                continue
            if moved not in T.r:
                report.add("rank", "image approximation lacks r", witness=moved.key())
                continue
            if S.r[a] > T.r[moved]:
                report.add("rank", f"r drops from {S.r[a]} to {T.r[moved]}", witness=(a.key(), moved.key()))
            if e.f[S.c[a]] != T.c[moved]:
                report.add("critical", "critical element not preserved", witness=(a.key(), moved.key()))
    return report


class _PointIndex:
    """Support, children and adjacency of one level of a ranked tree"""

    def __init__(self, T: RankedTree, level: int, parent_level: Optional[int] = None):
        self.level = level
        self.support = T.support(level)
        self.parent_level = level - 1 if parent_level is None else parent_level
        self.children: Dict[Seq, List[Seq]] = defaultdict(list)
        for s in self.support:
            self.children[s[: self.parent_level]].append(s)
        self.colors: Dict[Tuple[Seq, Seq], Set[int]] = {}
        self.neighbours: Dict[Seq, Set[Seq]] = defaultdict(set)
        for node in T.base.nodes(level):
            self.colors.setdefault(node.pair, set()).add(node.k)
            self.neighbours[node.x].add(node.y)
            self.neighbours[node.y].add(node.x)

    def children_of(self, parent: Seq) -> List[Seq]:
        """Support elements at this level extending parent"""
        return self.children.get(parent, [])

    def pair_colors(self, x: Seq, y: Seq) -> Set[int]:
        return self.colors.get((min(x, y), max(x, y)), set())


class IndexCache:
    """Point indices of one ranked tree, built once per (level, parent level)"""

    def __init__(self, T: RankedTree):
        self.T = T
        self._built: Dict[Tuple[int, int], _PointIndex] = {}

    def get(self, level: int, parent_level: Optional[int] = None) -> _PointIndex:
        parent_level = level - 1 if parent_level is None else parent_level
        key = (level, parent_level)
        if key not in self._built:
            self._built[key] = _PointIndex(self.T, level, parent_level)
        return self._built[key]


def _assign_colors(pending: List, f: Dict[Seq, Seq], f_star: Dict[int, int],
                   index: _PointIndex) -> Iterator[Dict[int, int]]:
    """Extend f_star so every pending template node has an image node"""
    if not pending:
        yield f_star
        return
    node, rest = pending[0], pending[1:]
    available = index.pair_colors(f[node.x], f[node.y])
    if node.k in f_star:
        if f_star[node.k] in available:
            yield from _assign_colors(rest, f, f_star, index)
        return
    used = set(f_star.values())
    for color in sorted(available - used):
        extended = dict(f_star)
        extended[node.k] = color
        yield from _assign_colors(rest, f, extended, index)


def _coherent(e: Embedding, S: RankedTree, T: RankedTree, approxs: List[Approximation]) -> bool:
    for a in approxs:
        moved = e.transport(a)
        if moved is None or moved not in T.r:
            return False
        if S.r[a] > T.r[moved] or e.f[S.c[a]] != T.c[moved]:
            return False
    return True


def _other(node, source: Seq) -> Seq:
    return node.x if node.y == source else node.y


def search_level(T: RankedTree, S: RankedTree, base: Embedding, sources: List[Seq],
                 parents: Dict[Seq, Seq], index: _PointIndex, nodes: List,
                 approxs: List[Approximation]) -> Optional[Embedding]:
    """Backtracking assignment of sources to distinct children of their parents' images.

    A source joined by a template node to an already placed source only
    tries targets adjacent to that source's image.
    """
    used: Set[Seq] = set(base.f.values())

    def place(i: int, f: Dict[Seq, Seq], f_star: Dict[int, int]) -> Optional[Embedding]:
        if i == len(sources):
            candidate = Embedding(dict(f), dict(f_star))
            return candidate if _coherent(candidate, S, T, approxs) else None
        source = sources[i]
        ready = [n for n in nodes if source in (n.x, n.y) and _other(n, source) in f]
        candidates = index.children_of(f[parents[source]])
        if ready:
            near = index.neighbours.get(f[_other(ready[0], source)], set())
            candidates = [t for t in candidates if t in near]
        for target in candidates:
            if target in used:
                continue
            f[source] = target
            used.add(target)
            for extended in _assign_colors(ready, f, f_star, index):
                found = place(i + 1, f, extended)
                if found is not None:
                    return found
            used.discard(target)
            del f[source]
        return None

    return place(0, dict(base.f), dict(base.f_star))


def check_partial(U: RankedTree, S: RankedTree, partial: Embedding, cap: int = DEFAULT_CAP) -> int:
    """Validate a partial embedding of the template roots; returns the image level"""
    roots = template_roots(S)
    missing = [r for r in roots if r not in partial.f]
    if missing:
        raise PreconditionError(f"partial embedding misses roots {[encode_seq(r) for r in missing]}")
    levels = {len(partial.f[r]) for r in roots}
    if len(levels) != 1:
        raise PreconditionError("partial embedding spans several levels")
    report = validate_embedding(partial.restricted_to(roots), root_part(S), U, cap)
    if not report.ok:
        raise PreconditionError(f"partial embedding is not an embedding: {report.summary()}")
    return levels.pop()


def extend_template_embedding(U: RankedTree, S: RankedTree, partial: Embedding,
                              cap: int = DEFAULT_CAP, within: Optional[int] = None,
                              indices: Optional[IndexCache] = None) -> Embedding:
    """Extend an embedding of the template roots to the children, searching upward.

    Args:
        U: Host ranked tree
        S: Template
        partial: Embedding of the template roots into one level of U
        cap: Approximation size cap
        within: Search only this many levels above the image of the roots
        indices: Point indices of U to reuse across calls

    Returns:
        Full embedding of S

    Raises:
        PreconditionError: partial is not an embedding of the root part
        NotFoundError: no extension within the truncation
    """
    level = check_partial(U, S, partial, cap)
    indices = indices or IndexCache(U)
    children = template_children(S)
    parents = {child: child[:ROOT_LEVEL] for child in children}
    nodes = S.base.nodes(CHILD_LEVEL)
    approxs = approximations(S.base, CHILD_LEVEL, cap) if nodes else []
    deepest = level
    last = U.height if within is None else min(U.height, level + 1 + within)
    for target_level in range(level + 1, last):
        deepest = target_level
        index = indices.get(target_level, parent_level=level)
        found = search_level(U, S, partial, children, parents, index, nodes, approxs)
        if found is not None:
            logger.debug(f"Template extended at level {target_level}")
            return found
    raise NotFoundError("no extension of the template embedding within the truncation", deepest)


def partial_embeddings(U: RankedTree, S: RankedTree, level: int, cap: int = DEFAULT_CAP,
                       indices: Optional[IndexCache] = None) -> Iterator[Embedding]:
    """All embeddings of the template roots into one level of U, in canonical order"""
    part = root_part(S)
    roots = template_roots(S)
    nodes = S.base.nodes(ROOT_LEVEL)
    approxs = approximations(part.base, ROOT_LEVEL, cap) if nodes else []
    index = (indices or IndexCache(U)).get(level)
    linked_points = sorted(index.neighbours)

    def place(i: int, f: Dict[Seq, Seq], f_star: Dict[int, int]) -> Iterator[Embedding]:
        if i == len(roots):
            candidate = Embedding(dict(f), dict(f_star))
            if _coherent(candidate, part, U, approxs):
                yield candidate
            return
        root = roots[i]
        linked = [n for n in nodes if root in (n.x, n.y) and _other(n, root) in f]
        if linked:
            candidates = sorted(index.neighbours.get(f[_other(linked[0], root)], ()))
        elif any(root in (n.x, n.y) for n in nodes):
            candidates = linked_points
        else:
            candidates = index.support
        used = set(f.values())
        for target in candidates:
            if target in used:
                continue
            f[root] = target
            for extended in _assign_colors(linked, f, f_star, index):
                yield from place(i + 1, f, extended)
            del f[root]

    yield from place(0, {}, {})
