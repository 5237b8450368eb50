"""
Colorank Universal Trees - Level-by-level construction of universal ranked trees
"""

import logging
from collections import defaultdict
from typing import Dict, Iterable, List, Optional, Set, Tuple

from ..core.config import Budgets, TemplateBounds
from ..core.errors import BudgetExceeded, ConsistencyError, NotFoundError, PreconditionError
from ..core.ordinal import OrdinalCNF
from ..core.report import ValidationReport
from ..core.sequences import Seq, zeros
from ..trees.approximation import Approximation, approximations
from ..trees.basic import BasicColoringTree, BasicNode
from ..trees.ranked import RankedTree, validate_ranked
from .embedding import Embedding, IndexCache, extend_template_embedding, partial_embeddings
from .template import (
    CHILD_LEVEL,
    ROOT_LEVEL,
    LevelBounds,
    canonical_form,
    in_class,
    lemma_bounds,
    level_bounds,
    root_template,
    template_children,
    template_family,
    template_roots,
)

Key = Tuple


def _zero_lift(a: Approximation) -> Approximation:
    return Approximation(
        a.level + 1,
        tuple(s + (0,) for s in a.v),
        tuple((tuple(s + (0,) for s in u), k) for u, k in a.h),
    )


class UniversalTree:
    """Universal gamma-ranked tree, built once and then only searched.

    Level n consists of the zero-extension of level n-1, one copy of every
    template of the level's class for every embedding of its roots into
    level n-1, and fresh roots below 0^(n-1) for the templates of level n+1.
    Only templates with the greatest ranks for their critical elements are
    copied; every other member of the class embeds into one of them.
    Extra templates are copied at every level whose size bounds admit them.
    """

    def __init__(self, gamma: OrdinalCNF, templates: Optional[TemplateBounds] = None,
                 budgets: Optional[Budgets] = None, extra: Iterable[RankedTree] = ()):
        if gamma.is_zero:
            raise PreconditionError("gamma must be positive")
        self.gamma = gamma
        self.templates = templates or TemplateBounds()
        self.budgets = budgets or Budgets()
        self.cap = self.budgets.approx_cap
        self.height = 1
        self.nodes: Dict[int, Set[BasicNode]] = defaultdict(set)
        self.r: Dict[Approximation, OrdinalCNF] = {}
        self.c: Dict[Approximation, Seq] = {}
        self.by_level: Dict[int, List[Approximation]] = defaultdict(list)
        self.recorded: Dict[int, LevelBounds] = {}
        self.recorded_extra: Dict[int, List[Key]] = {}
        self.extra: Dict[Key, RankedTree] = {}
        self._next_child: Dict[Seq, int] = {}
        self._next_color = 0
        self._node_count = 0
        self._families: Dict[Tuple[LevelBounds, bool], Dict[Key, RankedTree]] = {}
        self._snapshot: Optional[RankedTree] = None
        self._indices: Optional[IndexCache] = None
        self.logger = logging.getLogger(__name__)
        for S in extra:
            self.add_extra(S)

    def add_extra(self, S: RankedTree) -> Key:
        """Register a template to be copied wherever the size bounds of a level admit it"""
        if self.height > 1:
            raise PreconditionError("extra templates must be registered before the first level is built")
        if any(len(template_children(S, root)) > 2 for root in S.base.support(ROOT_LEVEL)):
            raise PreconditionError("extra template must have binary support")
        if any(not value < self.gamma for value in S.r.values()):
            raise PreconditionError(f"extra template has a rank not below gamma {self.gamma}")
        report = validate_ranked(S, self.cap, strict_extension=True)
        if not report.ok:
            raise PreconditionError(f"extra template is not a ranked tree: {report.summary()}")
        key, representative = canonical_form(S)
        self.extra.setdefault(key, representative)
        return key

    @classmethod
    def adopt(cls, R: RankedTree, templates: Optional[TemplateBounds] = None,
              budgets: Optional[Budgets] = None, extra: Iterable[RankedTree] = ()) -> "UniversalTree":
        """Wrap a ranked tree built by build_universal with the same configuration"""
        U = cls(R.gamma, templates, budgets, extra)
        U.height = R.height
        for node in R.base.all_nodes():
            U._add(node)
        for a, value in R.r.items():
            U._annotate(a, value, R.c[a])
        for n in range(1, U.height):
            bounds = U.bounds_at(n)
            if bounds is not None:
                U.recorded[n] = bounds
            U.recorded_extra[n] = [key for key, S in U.extra.items() if lemma_bounds(U.gamma, n).admits(S)]
        return U

    # -- bookkeeping ---------------------------------------------------

    def bounds_at(self, n: int) -> Optional[LevelBounds]:
        if n < 1 or n > self.templates.max_level:
            return None
        return level_bounds(self.gamma, n, self.templates.max_roots, self.templates.max_colors,
                            self.templates.max_splits)

    def family(self, bounds: Optional[LevelBounds], maximal: bool = False) -> Dict[Key, RankedTree]:
        """Canonical templates of the class cut out by bounds, cached"""
        if bounds is None:
            return {}
        if (bounds, maximal) not in self._families:
            self._families[bounds, maximal] = template_family(
                bounds.node_bound, bounds.color_bound, bounds.ranks, bounds.max_splits,
                self.cap, self.templates.enumeration_budget, maximal,
            )
        return self._families[bounds, maximal]

    def extras_at(self, n: int) -> Dict[Key, RankedTree]:
        if n < 1:
            return {}
        bounds = lemma_bounds(self.gamma, n)
        return {key: S for key, S in self.extra.items() if bounds.admits(S)}

    def _fresh_child(self, parent: Seq) -> Seq:
        tag = self._next_child.get(parent, 1)
        self._next_child[parent] = tag + 1
        return parent + (tag,)

    def _fresh_color(self) -> int:
        color = self._next_color
        self._next_color += 1
        return color

    def _add(self, node: BasicNode) -> None:
        if node not in self.nodes[node.level]:
            self.nodes[node.level].add(node)
            self._node_count += 1
            if self._node_count > self.budgets.node_budget:
                raise BudgetExceeded("universal tree nodes", self.budgets.node_budget)
            self._next_color = max(self._next_color, node.k + 1)
            for s in (node.x, node.y):
                for n in range(1, len(s) + 1):
                    parent = s[: n - 1]
                    self._next_child[parent] = max(self._next_child.get(parent, 1), s[n - 1] + 1)

    def _annotate(self, a: Approximation, rank: OrdinalCNF, critical: Seq) -> None:
        if a not in self.r:
            self.by_level[a.level].append(a)
        self.r[a] = rank
        self.c[a] = critical

    @property
    def tree(self) -> RankedTree:
        """Ranked-tree view of the truncation"""
        if self._snapshot is None:
            base = BasicColoringTree(self.height, 0,
                                     [node for level in range(self.height) for node in self.nodes[level]])
            self._snapshot = RankedTree(base=base, gamma=self.gamma, r=dict(self.r), c=dict(self.c), spine=True)
        return self._snapshot

    @property
    def indices(self) -> IndexCache:
        if self._indices is None or self._indices.T is not self.tree:
            self._indices = IndexCache(self.tree)
        return self._indices

    def node_count(self) -> int:
        return self._node_count

    # -- construction --------------------------------------------------

    def _zero_extend(self, n: int) -> None:
        for node in list(self.nodes[n - 1]):
            self._add(node.zero_extension())
        for a in list(self.by_level.get(n - 1, ())):
            self._annotate(_zero_lift(a), self.r[a], self.c[a] + (0,))

    def _realize_copy(self, S: RankedTree, partial: Embedding, n: int) -> None:
        f = dict(partial.f)
        f_star = dict(partial.f_star)
        for child in template_children(S):
            f[child] = self._fresh_child(partial.f[child[:ROOT_LEVEL]])
        for node in S.base.nodes(CHILD_LEVEL):
            if node.k not in f_star:
                f_star[node.k] = self._fresh_color()
        for node in S.base.nodes(CHILD_LEVEL):
            self._add(BasicNode(n, f[node.x], f[node.y], f_star[node.k]))
        e = Embedding(f, f_star)
        for a in approximations(S.base, CHILD_LEVEL, self.cap):
            self._annotate(e.transport(a), S.r[a], f[S.c[a]])

    def _realize_roots(self, part: RankedTree, n: int) -> None:
        """Fresh copies below 0^(n-1) of the roots of a root template"""
        theta = zeros(n - 1)
        f = {root: self._fresh_child(theta) for root in template_roots(part)}
        f_star: Dict[int, int] = {}
        for node in part.base.nodes(ROOT_LEVEL):
            if node.k not in f_star:
                f_star[node.k] = self._fresh_color()
            self._add(BasicNode(n, f[node.x], f[node.y], f_star[node.k]))
        e = Embedding(f, f_star)
        for a in approximations(part.base, ROOT_LEVEL, self.cap):
            self._annotate(e.transport(a), part.r[a], f[part.c[a]])

    def _copied_at(self, n: int) -> Dict[Key, RankedTree]:
        copied = dict(self.family(self.bounds_at(n), maximal=True))
        copied.update(self.extras_at(n))
        return copied

    def _grow(self) -> None:
        n = self.height
        if n >= self.budgets.max_height:
            raise BudgetExceeded("universal tree height", self.budgets.max_height)
        before = self.tree
        indices = IndexCache(before)
        self._zero_extend(n)
        realized = 0
        for S in self._copied_at(n).values():
            for partial in list(partial_embeddings(before, S, n - 1, self.cap, indices)):
                self._realize_copy(S, partial, n)
                realized += 1
        bounds = self.bounds_at(n)
        if bounds is not None:
            self.recorded[n] = bounds
        self.recorded_extra[n] = sorted(self.extras_at(n))
        parts: Dict[Key, RankedTree] = {}
        for S in self._copied_at(n + 1).values():
            part = root_template(S)
            if part.base.nodes(ROOT_LEVEL):
                parts.setdefault(canonical_form(part)[0], part)
        for part in parts.values():
            self._realize_roots(part, n)
        self.height = n + 1
        self._snapshot = None
        self.logger.info(f"Level {n}: {realized} template copies, {len(parts)} root parts, "
                         f"{self._node_count} nodes")

    # -- search --------------------------------------------------------

    def covers(self, S: RankedTree, n: int) -> bool:
        """S has a copy above every embedding of its roots into level n-1"""
        if n < 1 or n >= self.height:
            return False
        if canonical_form(S)[0] in self.recorded_extra.get(n, ()):
            return True
        bounds = self.recorded.get(n)
        return bounds is not None and in_class(S, bounds, self.cap)

    def covers_somewhere(self, S: RankedTree) -> bool:
        """S is covered at some level of a tall enough truncation"""
        if canonical_form(S)[0] in self.extra:
            return True
        bounds = self.bounds_at(self.templates.max_level)
        return bounds is not None and in_class(S, bounds, self.cap)

    def extend(self, S: RankedTree, partial: Embedding, within: Optional[int] = 1) -> Embedding:
        """Extend an embedding of S's roots to its children inside the tree.

        Raises:
            NotFoundError: the roots sit on the top level
            PreconditionError: S is not covered at the level above its roots
            ConsistencyError: S is covered but no extension exists
        """
        roots = list(partial.f.values())
        if not roots:
            raise PreconditionError("partial embedding is empty")
        level = len(roots[0])
        if level + 1 >= self.height:
            raise NotFoundError("universal tree too short to extend the template", self.height - 1)
        if not self.covers(S, level + 1):
            raise PreconditionError(f"template is outside the family copied at level {level + 1}")
        try:
            return extend_template_embedding(self.tree, S, partial, self.cap, within, self.indices)
        except NotFoundError as e:
            raise ConsistencyError(f"covered template has no extension: {e}") from e

    def embed_roots(self, S: RankedTree, level: int) -> Optional[Embedding]:
        """First embedding of S's roots into the given level, if any"""
        if not 0 <= level < self.height:
            return None
        return next(partial_embeddings(self.tree, S, level, self.cap, self.indices), None)

    # -- checks --------------------------------------------------------

    def check_universality(self, level: int) -> ValidationReport:
        """Every embedding into `level` of the roots of a template covered at level+1 extends at level+1.

        The whole class is checked, not only the copied templates.
        """
        report = ValidationReport(subject=f"universality at level {level}")
        members: Dict[Key, RankedTree] = {}
        bounds = self.recorded.get(level + 1)
        if bounds is not None:
            members.update(self.family(bounds))
        members.update({key: self.extra[key] for key in self.recorded_extra.get(level + 1, ())})
        if not members:
            report.notes.append(f"no templates covered at level {level + 1}")
            report.counts["templates"] = 0
            report.counts["checked"] = 0
            return report
        tree = self.tree
        checked = 0
        for index, S in enumerate(members.values()):
            for partial in partial_embeddings(tree, S, level, self.cap, self.indices):
                checked += 1
                try:
                    extend_template_embedding(tree, S, partial, self.cap, 1, self.indices)
                except NotFoundError as e:
                    report.add("universality", str(e), witness=(index, partial.describe()))
        report.counts["templates"] = len(members)
        report.counts["checked"] = checked
        report.notes.append(f"{checked} partial embeddings of {len(members)} templates checked")
        self.logger.info(f"check_universality({level}): {report.summary()}")
        return report


def build_universal(gamma: OrdinalCNF, height: int, templates: Optional[TemplateBounds] = None,
                    budgets: Optional[Budgets] = None, extra: Iterable[RankedTree] = ()) -> UniversalTree:
    """Height-H truncation of the universal gamma-ranked tree.

    Args:
        gamma: Rank bound, positive
        height: Number of levels
        templates: Bounds of the template class copied at each level
        budgets: Resource guards
        extra: Further templates copied wherever the size bounds of a level admit them

    Returns:
        The universal tree; `.tree` is its RankedTree view

    Raises:
        BudgetExceeded: height above the configured maximum, or too many nodes
    """
    if height < 1:
        raise PreconditionError("height must be at least 1")
    U = UniversalTree(gamma, templates, budgets, extra)
    if height > U.budgets.max_height:
        raise BudgetExceeded("universal tree height", U.budgets.max_height)
    while U.height < height:
        U._grow()
    return U
