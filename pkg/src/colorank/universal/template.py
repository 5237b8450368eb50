"""
Colorank Templates - Height-2 ranked trees with binary support
"""

import itertools
import logging
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from ..core.errors import BudgetExceeded, PreconditionError
from ..core.ordinal import OrdinalCNF, gamma_filtration, least_above
from ..core.sequences import Seq
from ..trees.approximation import (
    DEFAULT_BUDGET,
    DEFAULT_CAP,
    Approximation,
    approximations,
    restriction_of,
    splits,
)
from ..trees.basic import BasicColoringTree, BasicNode
from ..trees.rank import RankEngine
from ..trees.ranked import RankedTree, validate_ranked

logger = logging.getLogger(__name__)

# Templates live on levels 1 (roots (i,)) and 2 (children (i, e)) of a height-3 tree.
ROOT_LEVEL = 1
CHILD_LEVEL = 2


@dataclass(frozen=True)
class LevelBounds:
    """Size bounds of the templates handled at one level of a universal tree.

    max_splits caps the number of roots with two children; None leaves it open.
    """

    node_bound: int
    color_bound: int
    ranks: FrozenSet[OrdinalCNF]
    max_splits: Optional[int] = None

    def admits(self, template: RankedTree) -> bool:
        return (
            len(template_roots(template)) < self.node_bound
            and len(template_colors(template)) < self.color_bound
            and all(value in self.ranks for value in template.r.values())
            and (self.max_splits is None or split_count(template) <= self.max_splits)
        )

    def __str__(self) -> str:
        ranks = ",".join(str(r) for r in sorted(self.ranks))
        splits_part = "" if self.max_splits is None else f" splits<={self.max_splits}"
        return f"nodes<{self.node_bound} colors<{self.color_bound}{splits_part} ranks={{{ranks}}}"


def level_bounds(gamma: OrdinalCNF, n: int, max_roots: int, max_colors: int,
                 max_splits: Optional[int] = None) -> LevelBounds:
    return LevelBounds(
        node_bound=min(n, max_roots + 1),
        color_bound=min(n, max_colors + 1),
        ranks=frozenset(gamma_filtration(gamma, n)),
        max_splits=max_splits,
    )


def lemma_bounds(gamma: OrdinalCNF, n: int) -> LevelBounds:
    """Fewer than n roots and colors, ranks in the n-th piece of [0, gamma)"""
    return LevelBounds(node_bound=n, color_bound=n, ranks=frozenset(gamma_filtration(gamma, n)))


def empty_template() -> BasicColoringTree:
    return BasicColoringTree(CHILD_LEVEL + 1, ROOT_LEVEL)


def template_roots(template: RankedTree) -> List[Seq]:
    return template.base.support(ROOT_LEVEL)


def template_children(template: RankedTree, root: Optional[Seq] = None) -> List[Seq]:
    children = template.base.points(CHILD_LEVEL)
    if root is None:
        return children
    return [s for s in children if s[:ROOT_LEVEL] == root]


def template_colors(template: RankedTree) -> Set[int]:
    return template.base.colors()


def split_count(template: RankedTree) -> int:
    return sum(1 for root in template_roots(template) if len(template_children(template, root)) >= 2)


def root_part(template: RankedTree) -> RankedTree:
    """The level-0 part of a template as a height-2 ranked tree"""
    return template.restrict(CHILD_LEVEL)


def predecessor(b: Approximation, level: int, known: Set[Approximation]) -> Optional[Approximation]:
    """The approximation at `level` below b, if b's restriction is one of `known`"""
    lowered = restriction_of(b.v, level)
    if len(lowered) < 2:
        return None
    colors: Dict[Tuple[Seq, Seq], int] = {}
    for (x, y), k in b.h:
        key = tuple(sorted((x[:level], y[:level])))
        if key[0] == key[1]:
            continue
        if colors.setdefault(key, k) != k:
            return None
    candidate = Approximation.build(level, lowered, colors)
    return candidate if candidate in known else None


# -- shapes --------------------------------------------------------------

def _subsets(items: Sequence[int]) -> List[Tuple[int, ...]]:
    return [chosen for size in range(len(items) + 1) for chosen in itertools.combinations(items, size)]


def _shape_ok(palette: Sequence[int], children: Sequence[Seq], level0, level1) -> bool:
    used = {k for *_, k in level0} | {k for *_, k in level1}
    if used != set(palette):
        return False
    touched = {c for a, b, _ in level1 for c in (a, b)}
    if touched != set(children):
        return False
    present = {(a[0], b[0], k) for a, b, k in level1}
    return all(t in present for t in level0)


def _shapes(node_bound: int, color_bound: int, max_splits: Optional[int]) -> Iterator[List[BasicNode]]:
    """Labelled node sets: roots (i,), children (i, e) with split roots first, palette 0..q-1.

    Level-0 pairs and level-1 pairs take any subset of the palette, cross-parent
    pairs included; every child must lie in a node and every level-0 node must
    have an extension.
    """
    for s in range(1, node_bound):
        root_pairs = list(itertools.combinations(range(s), 2))
        for double in range(s + 1):
            if max_splits is not None and double > max_splits:
                break
            children = [(i, e) for i in range(s) for e in range(2 if i < double else 1)]
            child_pairs = list(itertools.combinations(children, 2))
            if not child_pairs:
                continue
            for q in range(1, color_bound):
                palette = list(range(q))
                options = _subsets(palette)
                for lower in itertools.product(options, repeat=len(root_pairs)):
                    level0 = [(i, j, k) for (i, j), chosen in zip(root_pairs, lower) for k in chosen]
                    for upper in itertools.product(options, repeat=len(child_pairs)):
                        level1 = [(a, b, k) for (a, b), chosen in zip(child_pairs, upper) for k in chosen]
                        if not _shape_ok(palette, children, level0, level1):
                            continue
                        nodes = [BasicNode(ROOT_LEVEL, (i,), (j,), k) for i, j, k in level0]
                        nodes += [BasicNode(CHILD_LEVEL, a, b, k) for a, b, k in level1]
                        yield nodes


# -- annotations -----------------------------------------------------------

class _Annotator:
    """All (r, c) tables of one shape satisfying the ranked-tree conditions.

    Equal rank along the order forces the critical element to extend the
    lower one whenever it does not split, whatever the sizes.
    """

    def __init__(self, base: BasicColoringTree, ranks: Sequence[OrdinalCNF], cap: int):
        self.base = base
        self.ranks = list(ranks)
        self.lower = sorted(approximations(base, ROOT_LEVEL, cap) if base.nodes(ROOT_LEVEL) else [],
                            key=lambda a: a.size)
        self.upper = sorted(approximations(base, CHILD_LEVEL, cap), key=lambda b: b.size)
        known = set(self.lower)
        self.below = {b: predecessor(b, ROOT_LEVEL, known) for b in self.upper}
        self.r: Dict[Approximation, OrdinalCNF] = {}
        self.c: Dict[Approximation, Seq] = {}

    def _subset_bound(self, a: Approximation) -> Optional[OrdinalCNF]:
        bound = None
        for size in range(2, a.size):
            for members in itertools.combinations(a.v, size):
                value = self.r[a.sub(members)]
                if bound is None or value < bound:
                    bound = value
        return bound

    def _lower_options(self, a: Approximation) -> List[Tuple[OrdinalCNF, Seq]]:
        bound = self._subset_bound(a)
        return [(r, c) for r in self.ranks if bound is None or r <= bound for c in a.v]

    def _upper_options(self, b: Approximation, maximal: bool) -> List[Tuple[OrdinalCNF, Seq]]:
        bound = self._subset_bound(b)
        allowed = [r for r in self.ranks if bound is None or r <= bound]
        a = self.below[b]
        extension = None
        if a is not None:
            top = self.r[a]
            if splits(self.c[a], b):
                allowed = [r for r in allowed if r < top]
            else:
                allowed = [r for r in allowed if r <= top]
                extension = b.extensions_of(self.c[a])[0]
        options = []
        for c in b.v:
            fitting = allowed
            if extension is not None and c != extension:
                fitting = [r for r in allowed if r < self.r[a]]
            if not fitting:
                continue
            if maximal:
                options.append((max(fitting), c))
            else:
                options.extend((r, c) for r in fitting)
        return options

    def _fill(self, items: List[Approximation], i: int, options) -> Iterator[None]:
        if i == len(items):
            yield None
            return
        a = items[i]
        for r, c in options(a):
            self.r[a], self.c[a] = r, c
            yield from self._fill(items, i + 1, options)
        self.r.pop(a, None)
        self.c.pop(a, None)

    def tables(self, gamma: OrdinalCNF, maximal: bool = False) -> Iterator[RankedTree]:
        """Every admissible table; with maximal, level-1 ranks are the greatest for their critical elements"""
        for _ in self._fill(self.lower, 0, self._lower_options):
            for _ in self._fill(self.upper, 0, lambda b: self._upper_options(b, maximal)):
                yield RankedTree(base=self.base, gamma=gamma, r=dict(self.r), c=dict(self.c))


def _raw_templates(node_bound: int, color_bound: int, ranks: Sequence[OrdinalCNF], max_splits: Optional[int],
                   cap: int, budget: int, maximal: bool) -> Iterator[RankedTree]:
    gamma = least_above(ranks)
    produced = 0
    for nodes in _shapes(node_bound, color_bound, max_splits):
        base = BasicColoringTree(CHILD_LEVEL + 1, ROOT_LEVEL, nodes)
        for R in _Annotator(base, ranks, cap).tables(gamma, maximal):
            produced += 1
            if produced > budget:
                raise BudgetExceeded("raw templates", budget)
            yield R


# -- canonical forms -----------------------------------------------------

def _relabel_seq(s: Seq, roots: Dict[int, int], swaps: Dict[int, int]) -> Seq:
    if len(s) == ROOT_LEVEL:
        return (roots[s[0]],)
    return (roots[s[0]], s[1] ^ swaps.get(s[0], 0))


def _relabel_approx(a: Approximation, roots, swaps, colors) -> Approximation:
    return Approximation.build(
        a.level,
        [_relabel_seq(s, roots, swaps) for s in a.v],
        {tuple(_relabel_seq(s, roots, swaps) for s in u): colors[k] for u, k in a.h},
    )


def _color_maps(template: RankedTree, roots, swaps) -> Iterator[Dict[int, int]]:
    """Color relabelings ordering colors by their relabelled node sets; only ties are permuted"""
    signature: Dict[int, List[Tuple]] = defaultdict(list)
    for node in template.base.all_nodes():
        ends = sorted((_relabel_seq(node.x, roots, swaps), _relabel_seq(node.y, roots, swaps)))
        signature[node.k].append((node.level, *ends))
    keyed = sorted((sorted(entries), k) for k, entries in signature.items())
    groups = [[k for _, k in group] for _, group in itertools.groupby(keyed, key=lambda item: item[0])]
    for perms in itertools.product(*[itertools.permutations(group) for group in groups]):
        order = [k for perm in perms for k in perm]
        yield {k: i for i, k in enumerate(order)}


def _relabelings(template: RankedTree) -> Iterator[Tuple[Dict[int, int], Dict[int, int], Dict[int, int]]]:
    roots = [s[0] for s in template_roots(template)]
    double, fixed = [], {}
    for i in roots:
        kids = template_children(template, (i,))
        if len(kids) == 2:
            double.append(i)
        elif kids:
            fixed[i] = kids[0][1]
    for perm in itertools.permutations(range(len(roots))):
        root_map = dict(zip(roots, perm))
        for bits in itertools.product((0, 1), repeat=len(double)):
            swaps = dict(fixed)
            swaps.update(zip(double, bits))
            for colors in _color_maps(template, root_map, swaps):
                yield root_map, swaps, colors


def _encode(template: RankedTree, roots, swaps, colors) -> Tuple:
    nodes = tuple(sorted(
        (n.level, *sorted((_relabel_seq(n.x, roots, swaps), _relabel_seq(n.y, roots, swaps))), colors[n.k])
        for n in template.base.all_nodes()
    ))
    annotations = tuple(sorted(
        (b.level, b.v, b.h, template.r[a].terms, _relabel_seq(template.c[a], roots, swaps))
        for a in template.r
        for b in [_relabel_approx(a, roots, swaps, colors)]
    ))
    return len(roots), nodes, annotations


def relabel_template(template: RankedTree, roots, swaps, colors) -> RankedTree:
    base = BasicColoringTree(CHILD_LEVEL + 1, ROOT_LEVEL, [
        BasicNode(n.level, _relabel_seq(n.x, roots, swaps), _relabel_seq(n.y, roots, swaps), colors[n.k])
        for n in template.base.all_nodes()
    ])
    R = RankedTree(base=base, gamma=template.gamma)
    for a, value in template.r.items():
        R.annotate(_relabel_approx(a, roots, swaps, colors), value,
                   _relabel_seq(template.c[a], roots, swaps))
    return R


def canonical_form(template: RankedTree) -> Tuple[Tuple, RankedTree]:
    """Least encoding over root, child and color relabelings, with its template.

    Children of single-child roots are renamed (i, 0); colors are ordered by
    the nodes carrying them, so only colors with identical node sets are
    permuted.
    """
    best_key, best_map = None, None
    for mapping in _relabelings(template):
        key = _encode(template, *mapping)
        if best_key is None or key < best_key:
            best_key, best_map = key, mapping
    if best_map is None:
        return ((0, (), ()), template)
    return best_key, relabel_template(template, *best_map)


def template_family(node_bound: int, color_bound: int, ranks: Iterable[OrdinalCNF],
                    max_splits: Optional[int] = None, cap: int = DEFAULT_CAP, budget: int = 200_000,
                    maximal: bool = False) -> Dict[Tuple, RankedTree]:
    """Canonical key to representative, one per isomorphism type of template.

    Args:
        node_bound: Number of roots must be below this
        color_bound: Number of colors must be below this
        ranks: Allowed rank values
        max_splits: Largest number of roots with two children, None for no limit
        cap: Approximation size cap
        budget: Guard on raw templates generated
        maximal: Keep only the greatest level-1 ranks for each choice of critical elements

    Returns:
        Mapping from canonical encoding to canonical template
    """
    if node_bound < 1 or color_bound < 1:
        raise PreconditionError("template bounds must be at least 1")
    ranks = sorted(set(ranks))
    found: Dict[Tuple, RankedTree] = {}
    if not ranks:
        return found
    for raw in _raw_templates(node_bound, color_bound, ranks, max_splits, cap, budget, maximal):
        key, representative = canonical_form(raw)
        found.setdefault(key, representative)
    logger.info(f"{len(found)} template types for nodes<{node_bound} colors<{color_bound} "
                f"splits<={max_splits} ranks={[str(r) for r in ranks]}{' (maximal)' if maximal else ''}")
    return found


def enumerate_templates(node_bound: int, color_bound: int, ranks: Iterable[OrdinalCNF],
                        cap: int = DEFAULT_CAP, budget: int = 200_000,
                        max_splits: Optional[int] = None) -> List[RankedTree]:
    """One canonical representative per isomorphism type, sorted by canonical encoding"""
    found = template_family(node_bound, color_bound, ranks, max_splits, cap, budget)
    return [found[key] for key in sorted(found)]


def template_from_levels(S: RankedTree, n: int, cap: int = DEFAULT_CAP) -> Tuple[RankedTree, Dict[Seq, Seq]]:
    """Template read off levels n and n+1 of S.

    Returns the template and the map from template sequences to S sequences.
    Every support element must have at most two children.
    """
    roots = S.support(n)
    to_template: Dict[Seq, Seq] = {}
    for i, x in enumerate(roots):
        to_template[x] = (i,)
        if n + 1 < S.height:
            kids = [s for s in S.support(n + 1) if s[:n] == x]
            if len(kids) > 2:
                raise PreconditionError(f"support element has {len(kids)} children; binary support required")
            for e, child in enumerate(kids):
                to_template[child] = (i, e)
    nodes = [BasicNode(ROOT_LEVEL, to_template[node.x], to_template[node.y], node.k) for node in S.base.nodes(n)]
    if n + 1 < S.height:
        nodes += [BasicNode(CHILD_LEVEL, to_template[node.x], to_template[node.y], node.k)
                  for node in S.base.nodes(n + 1)]
    base = BasicColoringTree(CHILD_LEVEL + 1, ROOT_LEVEL, nodes)
    template = RankedTree(base=base, gamma=S.gamma)
    for level, local in ((n, ROOT_LEVEL), (n + 1, CHILD_LEVEL)):
        if level >= S.height or not S.base.nodes(level):
            continue
        for a in approximations(S.base, level, cap):
            if a not in S.r:
                raise PreconditionError(f"ranked tree lacks r for {a.key()}")
            moved = Approximation.build(
                local, [to_template[s] for s in a.v],
                {tuple(to_template[s] for s in u): k for u, k in a.h},
            )
            template.annotate(moved, S.r[a], to_template[S.c[a]])
    back = {t: s for s, t in to_template.items()}
    return template, back


# -- binary support --------------------------------------------------------

def _digits(j: int, width: int) -> Seq:
    return tuple((j >> (width - 1 - i)) & 1 for i in range(width))


def _node_levels(S: RankedTree) -> List[int]:
    return [n for n in S.base.level_range() if S.base.nodes(n)]


def binarize(S: RankedTree, cap: int = DEFAULT_CAP,
             budget: int = DEFAULT_BUDGET) -> Tuple[RankedTree, Dict[Seq, Seq]]:
    """Ranked tree with binary support carrying S on a subset of its levels.

    A level whose support elements have up to k > 2 children is followed by
    ceil(log2 k) - 1 inserted levels; the j-th child is addressed by the
    binary digits of j. Inserted approximations get the least ranks the
    ranked-tree conditions allow, and ranks on the kept levels grow where
    the inserted levels need room.

    Args:
        S: Ranked tree
        cap: Approximation size cap
        budget: Approximation budget

    Returns:
        The binary tree and the map from S's support to it (identity when S is binary)

    Raises:
        PreconditionError: the rebuilt annotations violate the ranked-tree conditions
    """
    levels = _node_levels(S)
    identity = {s: s for n in range(S.height) for s in S.support(n)}
    if not levels:
        return S, identity
    first = levels[0]
    kids_of: Dict[Seq, List[Seq]] = {}
    widths: Dict[int, int] = {}
    for n in range(first, S.height - 1):
        most = 1
        for x in S.support(n):
            kids_of[x] = [s for s in S.support(n + 1) if s[:n] == x]
            most = max(most, len(kids_of[x]))
        widths[n] = max(1, math.ceil(math.log2(most)))
    if all(len(kids) <= 2 for kids in kids_of.values()):
        return S, identity

    sigma: Dict[Seq, Seq] = {s: s for n in range(first + 1) for s in S.support(n)}
    placed = {first: first}
    for n in range(first, S.height - 1):
        placed[n + 1] = placed[n] + widths[n]
        for x in S.support(n):
            for j, kid in enumerate(kids_of[x]):
                sigma[kid] = sigma[x] + _digits(j, widths[n])
    height = placed[S.height - 1] + 1
    nodes = [BasicNode(placed[n], sigma[node.x], sigma[node.y], node.k) for n in levels for node in S.base.nodes(n)]
    for n in range(first, S.height - 1):
        for node in S.base.nodes(n + 1):
            x, y = sigma[node.x], sigma[node.y]
            for m in range(placed[n] + 1, placed[n + 1]):
                if x[:m] != y[:m]:
                    nodes.append(BasicNode(m, x[:m], y[:m], node.k))
    base = BasicColoringTree(height, S.base.min_level, nodes)

    back = {t: s for s, t in sigma.items()}
    kept = {placed[n]: n for n in placed}
    floor = {m: max(level for level in kept if level <= m) for m in range(first, height)}
    engine = RankEngine(base, cap, budget)
    R = RankedTree(base=base, gamma=S.gamma)
    zero = OrdinalCNF()
    for m in sorted(engine.by_level, reverse=True):
        known = set(engine.by_level.get(floor[m], ()))
        for b in engine.by_level[m]:
            successors = engine.successors(b)

            def value(p: Seq) -> OrdinalCNF:
                best = zero
                for upper in successors:
                    need = R.r[upper].successor() if splits(p, upper) else R.r[upper]
                    best = max(best, need)
                return best

            if m in kept:
                original = Approximation.build(
                    kept[m], [back[s] for s in b.v], {tuple(back[s] for s in u): k for u, k in b.h},
                )
                critical = sigma[S.c[original]]
                R.annotate(b, max(S.r[original], value(critical)), critical)
                continue
            below = predecessor(b, floor[m], known)
            choice = None
            if below is not None:
                lower_critical = sigma[S.c[Approximation.build(
                    kept[floor[m]], [back[s] for s in below.v],
                    {tuple(back[s] for s in u): k for u, k in below.h},
                )]]
                if not splits(lower_critical, b):
                    choice = b.extensions_of(lower_critical)[0]
            if choice is None:
                choice = min(b.v, key=lambda p: (value(p), p))
            R.annotate(b, value(choice), choice)
    R.gamma = max(S.gamma, least_above(R.r.values()))
    report = validate_ranked(R, cap, budget, engine)
    if not report.ok:
        raise PreconditionError(f"binary rebuild is not a ranked tree: {report.summary()}")
    logger.info(f"binarize: height {S.height} -> {height}")
    return R, sigma


def level_templates(S: RankedTree, cap: int = DEFAULT_CAP, budget: int = DEFAULT_BUDGET) -> List[RankedTree]:
    """Consecutive-level templates of S after binarization, lowest first"""
    binary, _ = binarize(S, cap, budget)
    levels = _node_levels(binary)
    if not levels:
        return []
    first = levels[0]
    last = max(first + 1, binary.height - 1)
    return [template_from_levels(binary, n, cap)[0] for n in range(first, last)]


def in_class(template: RankedTree, bounds: LevelBounds, cap: int = DEFAULT_CAP) -> bool:
    """Membership in the template class cut out by bounds, without enumerating it.

    Binary support, every child inside a node, every root node extended, at
    least one child pair, ranks and sizes within bounds and the ranked-tree
    conditions with extension at equal rank across sizes.
    """
    if not bounds.admits(template):
        return False
    roots = template_roots(template)
    children = template_children(template)
    if not roots or any(len(template_children(template, root)) > 2 for root in roots):
        return False
    touched = {s for node in template.base.nodes(CHILD_LEVEL) for s in (node.x, node.y)}
    if not touched or touched != set(children):
        return False
    extended = {(node.x[:ROOT_LEVEL], node.y[:ROOT_LEVEL], node.k) for node in template.base.nodes(CHILD_LEVEL)}
    if any((node.x, node.y, node.k) not in extended for node in template.base.nodes(ROOT_LEVEL)):
        return False
    return validate_ranked(template, cap, strict_extension=True).ok


def root_template(template: RankedTree) -> RankedTree:
    """The level-0 nodes and annotations of a template, roots outside every node dropped"""
    base = BasicColoringTree(CHILD_LEVEL + 1, ROOT_LEVEL, template.base.nodes(ROOT_LEVEL))
    R = RankedTree(base=base, gamma=template.gamma)
    for a, value in template.r.items():
        if a.level == ROOT_LEVEL:
            R.annotate(a, value, template.c[a])
    return R
