"""
Colorank Embed - Embedding ranked trees and colorings into universal trees
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from ..core.errors import BudgetExceeded, ConsistencyError, NotFoundError, PreconditionError
from ..core.ordinal import OrdinalCNF
from ..core.sequences import Seq, zeros
from ..trees.basic import BasicColoringTree, BasicNode
from ..trees.rank import rank_all
from ..trees.ranked import RankedTree, derive_ranked
from .builder import UniversalTree
from .embedding import Embedding, validate_embedding
from .template import (
    ROOT_LEVEL,
    binarize,
    lemma_bounds,
    level_templates,
    template_children,
    template_colors,
    template_from_levels,
    template_roots,
)

logger = logging.getLogger(__name__)


def _node_levels(S: RankedTree) -> List[int]:
    return [n for n in S.base.level_range() if S.base.nodes(n)]


def check_full_support(S: RankedTree) -> None:
    """Every support element above the first colored level must be a node coordinate"""
    levels = _node_levels(S)
    if not levels:
        return
    for n in range(levels[0], S.height):
        loose = set(S.support(n)) - set(S.base.points(n))
        if loose:
            raise PreconditionError(
                f"support element {sorted(loose)[0]} at level {n} belongs to no node; "
                f"only full-support trees embed"
            )


def check_persistent_colors(S: RankedTree) -> None:
    """A color may not vanish from a level and reappear higher up"""
    seen: Dict[int, int] = {}
    for n in _node_levels(S):
        for k in S.base.colors(n):
            last = seen.get(k)
            if last is not None and last < n - 1:
                raise PreconditionError(f"color {k} vanishes after level {last} and reappears at level {n}")
            seen[k] = n


def _read_templates(binary: RankedTree, cap: int) -> List[Tuple[RankedTree, Dict[Seq, Seq]]]:
    levels = _node_levels(binary)
    first = levels[0]
    last = max(first + 1, binary.height - 1)
    return [template_from_levels(binary, n, cap) for n in range(first, last)]


def _place(U: UniversalTree, read: List[Tuple[RankedTree, Dict[Seq, Seq]]]) -> Embedding:
    """Lowest placement of the first template's roots from which every template is covered"""
    templates = [T for T, _ in read]
    if not template_children(templates[0]):
        for level in range(U.height):
            partial = U.embed_roots(templates[0], level)
            if partial is not None:
                return partial
        raise NotFoundError("no level of the universal tree holds the roots", U.height - 1)
    for k, T in enumerate(templates):
        if not U.covers_somewhere(T):
            raise PreconditionError(f"template read at offset {k} is outside the family the universal tree copies")
    for level in range(U.height - len(templates)):
        if not all(U.covers(T, level + k + 1) for k, T in enumerate(templates)):
            continue
        partial = U.embed_roots(templates[0], level)
        if partial is not None:
            logger.debug(f"Roots placed at level {level}")
            return partial
    raise NotFoundError("universal tree too short for the ranked tree", U.height - 1)


def embed_ranked(S: RankedTree, U: UniversalTree) -> Embedding:
    """Embed a ranked tree into a universal tree by search.

    S is first given binary support. Each consecutive level pair is read as
    a template; the roots of the lowest one are placed on the lowest level
    from which every template is copied, and each template is then
    extended one level up. U is not modified.

    Args:
        S: Ranked tree with full support and ranks below U's gamma
        U: Universal tree

    Returns:
        Embedding of S into U.tree

    Raises:
        PreconditionError: S is outside the class U is universal for
        NotFoundError: U is too short
        ConsistencyError: the assembled map fails validation
    """
    too_high = [a for a, value in S.r.items() if not value < U.gamma]
    if too_high:
        raise PreconditionError(f"rank {S.r[too_high[0]]} is not below gamma {U.gamma}")
    check_full_support(S)
    if not _node_levels(S):
        return Embedding()
    binary, sigma = binarize(S, U.cap, U.budgets.approx_budget)
    check_persistent_colors(binary)
    if any(not value < U.gamma for value in binary.r.values()):
        raise PreconditionError(f"binary support needs ranks up to {binary.gamma}, not below gamma {U.gamma}")
    read = _read_templates(binary, U.cap)
    placed = _place(U, read)
    first, back = read[0]
    f: Dict[Seq, Seq] = {back[t]: placed.f[t] for t in template_roots(first)}
    f_star: Dict[int, int] = dict(placed.f_star)
    for T, back in read:
        if not template_children(T):
            break
        colors = {node.k for node in T.base.nodes(ROOT_LEVEL)}
        partial = Embedding({t: f[back[t]] for t in template_roots(T)},
                            {k: j for k, j in f_star.items() if k in colors})
        extended = U.extend(T, partial)
        for t in template_children(T):
            f[back[t]] = extended.f[t]
        for k in template_colors(T):
            if f_star.setdefault(k, extended.f_star[k]) != extended.f_star[k]:
                raise ConsistencyError(f"color {k} maps to two colors of the universal tree")
    e = Embedding({s: f[t] for s, t in sigma.items() if t in f}, f_star)
    report = validate_embedding(e, S, U.tree, U.cap)
    if not report.ok:
        raise ConsistencyError(f"assembled embedding is invalid: {report.summary()}")
    logger.info(f"Embedded {len(e.f)} support elements into a universal tree of height {U.height}")
    return e


def augment_coloring(S: BasicColoringTree, base_point: Optional[Seq] = None) -> BasicColoringTree:
    """Adjoin a base branch x0 colored with a fresh color against every other branch.

    Args:
        S: Basic coloring tree
        base_point: Top-level string used as x0, 0^(H-1) by default

    Returns:
        S' with the pairs {x0|n, x|n} colored c0 = max color + 1
    """
    top = S.height - 1
    x0 = base_point if base_point is not None else zeros(top)
    c0 = max(S.colors(), default=-1) + 1
    branches = set(S.support(top)) | {x0}
    augmented = BasicColoringTree(S.height, max(S.min_level, 1), list(S.all_nodes()))
    for n in range(max(S.min_level, 1), S.height):
        for x in branches:
            if x[:n] != x0[:n]:
                augmented.add_node(BasicNode(n, x0[:n], x[:n], c0))
    return augmented


@dataclass
class ColoringEmbedding:
    """String map induced by embedding an augmented coloring"""

    phi: Dict[Seq, Seq] = field(default_factory=dict)
    embedding: Optional[Embedding] = None
    rank: int = 0
    augmented_rank: int = 0

    @property
    def rank_preserved(self) -> bool:
        return self.rank == self.augmented_rank


def embed_coloring(S: BasicColoringTree, U: UniversalTree) -> ColoringEmbedding:
    """Topological embedding of a coloring's branches into U.

    Pairs colored in S at every level map to pairs colored in U at every
    mapped level, via the augmentation with a fresh base branch. A lone
    branch carries no node and maps to the spine.
    """
    top = S.height - 1
    augmented = augment_coloring(S)
    rank = rank_all(S, U.cap, U.budgets.approx_budget).tree_rank
    augmented_rank = rank_all(augmented, U.cap, U.budgets.approx_budget).tree_rank
    if rank != augmented_rank:
        logger.warning(f"Augmentation changed the truncation rank from {rank} to {augmented_rank}")
    ranked = derive_ranked(augmented, U.cap, U.budgets.approx_budget)
    e = embed_ranked(ranked, U)
    branches = S.support(top) or [zeros(top)]
    phi = {x: e.f[x] for x in branches if x in e.f}
    if not phi:
        phi = {x: zeros(U.height - 1) for x in branches}
    return ColoringEmbedding(phi=phi, embedding=e, rank=rank, augmented_rank=augmented_rank)


def coloring_templates(S: BasicColoringTree, cap: int, budget: int) -> List[RankedTree]:
    """Templates embed_coloring reads off S, for building a universal tree that copies them"""
    augmented = augment_coloring(S)
    if augmented.node_count() == 0:
        return []
    return level_templates(derive_ranked(augmented, cap, budget), cap, budget)


def required_height(templates: List[RankedTree], gamma: OrdinalCNF, max_height: int) -> int:
    """Least height of a universal tree copying `templates` as extras that embed_ranked can use"""
    if not templates:
        return 1
    for level in range(1, max_height):
        if all(lemma_bounds(gamma, level + k + 1).admits(T) for k, T in enumerate(templates)):
            return level + len(templates) + 1
    raise BudgetExceeded("universal tree height", max_height)
