"""
Colorank Poset - Density extensions and amalgamation of forcing conditions
"""

import itertools
import logging
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from ..core.config import Budgets, TemplateBounds
from ..core.errors import NotFoundError, PreconditionError
from ..core.ordinal import OrdinalCNF, least_above
from ..core.report import ValidationReport
from ..core.sequences import Seq, zeros
from ..model.rank import RankedModelOracle
from ..trees.approximation import DEFAULT_CAP, approximations
from ..trees.basic import BasicColoringTree, BasicNode
from ..trees.ranked import RankedTree, validate_ranked
from ..universal.builder import UniversalTree, build_universal
from ..universal.embedding import Embedding
from ..universal.template import CHILD_LEVEL, ROOT_LEVEL, canonical_form, lemma_bounds
from .condition import ForcingCondition, Pair, pair

logger = logging.getLogger(__name__)

ChildSpec = Dict[Seq, int]
LevelOneNode = Tuple[Seq, Seq, int]


def check_gamma(oracle: RankedModelOracle, U: UniversalTree) -> None:
    """Oracle ranks must lie below the universal tree's gamma"""
    for w, value in oracle.rank.items():
        if not value < U.gamma:
            raise PreconditionError(f"oracle rank {value} of {sorted(w)} is not below gamma {U.gamma}")


def _fresh_label(colors: Mapping[Pair, int]) -> int:
    return max(colors.values(), default=-1) + 1


def _annotate(S: RankedTree, level: int, carried: Mapping[Seq, int], oracle: RankedModelOracle,
              cap: int) -> None:
    """r and c from the oracle; outside its domain r is 0 and c carries the least element"""
    for a in approximations(S.base, level, cap):
        points = {carried[s]: s for s in a.v}
        rank = oracle.rank_of(list(points))
        if rank is None:
            S.annotate(a, OrdinalCNF.of(0), points[min(points)])
        else:
            S.annotate(a, rank, points[oracle.critical_of(list(points))])


def _template(order: Sequence[int], colors: Mapping[Pair, int], children: ChildSpec,
              level_one: List[LevelOneNode], oracle: RankedModelOracle, gamma: OrdinalCNF,
              cap: int) -> RankedTree:
    """Template whose root (i,) carries order[i] and whose children carry the given elements"""
    nodes = [
        BasicNode(ROOT_LEVEL, (i,), (j,), colors[pair(a, b)])
        for (i, a), (j, b) in itertools.combinations(enumerate(order), 2)
    ]
    nodes += [BasicNode(CHILD_LEVEL, x, y, k) for x, y, k in level_one]
    base = BasicColoringTree(CHILD_LEVEL + 1, ROOT_LEVEL, nodes)
    S = RankedTree(base=base, gamma=gamma)
    _annotate(S, ROOT_LEVEL, {(i,): a for i, a in enumerate(order)}, oracle, cap)
    _annotate(S, CHILD_LEVEL, children, oracle, cap)
    return S


def _roots_of(p: ForcingCondition) -> Embedding:
    return Embedding({(i,): p.eta[a] for i, a in enumerate(p.w)}, {k: k for k in set(p.g.values())})


def _inner_colors(order: Sequence[int], colors: Mapping[Pair, int]) -> List[LevelOneNode]:
    return [
        ((i, 0), (j, 0), colors[pair(a, b)])
        for (i, a), (j, b) in itertools.combinations(enumerate(order), 2)
    ]


def adjoin_template(order: Sequence[int], colors: Mapping[Pair, int], alpha: int, oracle: RankedModelOracle,
                    gamma: OrdinalCNF, cap: int = DEFAULT_CAP) -> Tuple[RankedTree, Seq]:
    """Template adding alpha as a new child next to one root, joined to every old child by one fresh color.

    The newcomer sits next to the largest root for which the template is a
    ranked tree.

    Returns:
        The template and the newcomer's child sequence

    Raises:
        PreconditionError: no root admits the newcomer
    """
    fresh = _fresh_label(colors)
    children: ChildSpec = {(i, 0): a for i, a in enumerate(order)}
    for anchor in reversed(range(len(order))):
        newcomer = (anchor, 1)
        level_one = _inner_colors(order, colors)
        level_one += [((i, 0), newcomer, fresh) for i in range(len(order))]
        S = _template(order, colors, {**children, newcomer: alpha}, level_one, oracle, gamma, cap)
        if validate_ranked(S, cap, strict_extension=True).ok:
            return S, newcomer
    raise PreconditionError(f"no root of {list(order)} admits {alpha} as a ranked template")


def amalgamation_template(order: Sequence[int], colors: Mapping[Pair, int], rest: Sequence[int],
                          f: Mapping[int, int], oracle: RankedModelOracle, gamma: OrdinalCNF,
                          cap: int = DEFAULT_CAP) -> RankedTree:
    """Template over order where root i outside the common part gets a second child carrying f(order[i]).

    Pairs between an element outside the common part and the image of
    another share one fresh color.
    """
    fresh = _fresh_label(colors)
    common = [i for i in range(len(order)) if i not in rest]
    children: ChildSpec = {(i, 0): a for i, a in enumerate(order)}
    children.update({(i, 1): f[order[i]] for i in rest})
    level_one = _inner_colors(order, colors)
    for i, a in enumerate(order):
        for j in rest:
            if i in common:
                level_one.append(((i, 0), (j, 1), colors[pair(a, order[j])]))
            else:
                level_one.append(((i, 0), (j, 1), fresh))
    for i, j in itertools.combinations(rest, 2):
        level_one.append(((i, 1), (j, 1), colors[pair(order[i], order[j])]))
    return _template(order, colors, children, level_one, oracle, gamma, cap)


def _chain_colors(order: Sequence[int]) -> Dict[Pair, int]:
    """Colors of a condition whose elements were adjoined in increasing order"""
    return {pair(a, b): max(a, b) for a, b in itertools.combinations(order, 2)}


def forcing_templates(oracle: RankedModelOracle, gamma: OrdinalCNF, cap: int = DEFAULT_CAP) -> List[RankedTree]:
    """Templates adjoining the elements of the universe one at a time in increasing order"""
    found = []
    for j in range(1, oracle.size):
        order = list(range(j))
        S, _ = adjoin_template(order, _chain_colors(order), j, oracle, gamma, cap)
        found.append(S)
    return found


def amalgamation_templates(oracle: RankedModelOracle, max_size: int, gamma: OrdinalCNF,
                           cap: int = DEFAULT_CAP) -> List[RankedTree]:
    """Amalgamation templates of initial segments with at most max_size elements, one per isomorphism type"""
    found: Dict[Tuple, RankedTree] = {}
    for j in range(1, min(max_size, oracle.size) + 1):
        order = list(range(j))
        colors = _chain_colors(order)
        for common_size in range(j):
            for common in itertools.combinations(order, common_size):
                movable = [a for a in order if a not in common]
                free = [x for x in range(j, oracle.size)]
                for images in itertools.combinations(free, len(movable)):
                    f = {a: a for a in common}
                    f.update(zip(movable, images))
                    if any(f[x] >= f[y] for x, y in zip(order, order[1:])):
                        continue
                    if _oracle_disagreements(order, f, oracle):
                        continue
                    rest = [i for i, a in enumerate(order) if a not in common]
                    S = amalgamation_template(order, colors, rest, f, oracle, gamma, cap)
                    if not validate_ranked(S, cap, strict_extension=True).ok:
                        logger.debug(f"Skipping amalgamation of {order} over {list(common)}: not a ranked template")
                        continue
                    key, representative = canonical_form(S)
                    found.setdefault(key, representative)
    logger.info(f"{len(found)} amalgamation templates up to {max_size} elements")
    return [found[key] for key in sorted(found)]


def forcing_universal(oracle: RankedModelOracle, height: int, budgets: Optional[Budgets] = None,
                      amalgamation_size: int = 0) -> UniversalTree:
    """Universal tree copying the templates the generic family and its amalgamations use.

    Args:
        oracle: Rank oracle
        height: Number of levels
        budgets: Resource guards
        amalgamation_size: Largest initial segment whose amalgamation templates are copied

    Returns:
        Universal tree with gamma just above the oracle's ranks
    """
    budgets = budgets or Budgets()
    gamma = least_above(oracle.rank.values())
    extra = forcing_templates(oracle, gamma, budgets.approx_cap)
    if amalgamation_size:
        extra += amalgamation_templates(oracle, amalgamation_size, gamma, budgets.approx_cap)
    return build_universal(gamma, height, TemplateBounds(max_level=0), budgets, extra)


def zero_step(p: ForcingCondition, U: UniversalTree) -> ForcingCondition:
    """Move every eta value one level up along the zero-extension"""
    if p.n + 1 >= U.height:
        raise NotFoundError("universal tree too short for a zero step", U.height - 1)
    return ForcingCondition(p.n + 1, {a: s + (0,) for a, s in p.eta.items()}, dict(p.g))


def _lift_until_covered(p: ForcingCondition, S: RankedTree, U: UniversalTree) -> ForcingCondition:
    """Zero steps until S is copied above level p.n"""
    if not U.covers_somewhere(S):
        raise PreconditionError("template is outside the family the universal tree copies")
    while not U.covers(S, p.n + 1):
        p = zero_step(p, U)
    return p


def _adjoin(p: ForcingCondition, alpha: int, oracle: RankedModelOracle, U: UniversalTree) -> ForcingCondition:
    """One-level extension adding alpha next to the largest admissible element of w^p"""
    order = p.w
    S, newcomer = adjoin_template(order, p.g, alpha, oracle, U.gamma, U.cap)
    p = _lift_until_covered(p, S, U)
    e = U.extend(S, _roots_of(p))
    eta = {a: e.f[(i, 0)] for i, a in enumerate(order)}
    eta[alpha] = e.f[newcomer]
    g = dict(p.g)
    fresh = _fresh_label(p.g)
    for a in order:
        g[pair(a, alpha)] = e.f_star[fresh]
    q = ForcingCondition(len(eta[alpha]), eta, g)
    logger.debug(f"Adjoined {alpha} at level {q.n}")
    return q


def extend_into_dense(p: ForcingCondition, alpha: int, n: int, oracle: RankedModelOracle,
                      U: UniversalTree) -> ForcingCondition:
    """Extension q >= p with alpha in w^q and n^q >= n, found inside U.

    Args:
        p: Valid condition
        alpha: Element of the oracle's universe
        n: Level to reach
        oracle: Rank oracle
        U: Universal tree, read only

    Returns:
        The extended condition

    Raises:
        NotFoundError: U is too short
        PreconditionError: the extension needs a template U does not copy
    """
    if not 0 <= alpha < oracle.size:
        raise PreconditionError(f"element {alpha} outside the universe of size {oracle.size}")
    check_gamma(oracle, U)
    q = p
    if alpha not in q.eta:
        if q.eta:
            q = _adjoin(q, alpha, oracle, U)
        else:
            if q.n >= U.height:
                raise NotFoundError("universal tree too short for the first element", U.height - 1)
            q = ForcingCondition(q.n, {alpha: zeros(q.n)}, {})
    while q.n < n:
        q = zero_step(q, U)
    return q


def _oracle_disagreements(order: Sequence[int], f: Mapping[int, int], oracle: RankedModelOracle) -> List[str]:
    """Subsets of order on which f fails to preserve the oracle's domain, ranks or critical elements"""
    problems = []
    for size in range(1, len(order) + 1):
        for v in itertools.combinations(order, size):
            image = [f[a] for a in v]
            rank, moved = oracle.rank_of(v), oracle.rank_of(image)
            if (rank is None) != (moved is None):
                problems.append(f"{list(v)}: oracle domain not preserved by f")
            elif rank is not None:
                if rank != moved:
                    problems.append(f"{list(v)}: oracle rank {rank} differs from {moved}")
                elif f[oracle.critical_of(v)] != oracle.critical_of(image):
                    problems.append(f"{list(v)}: critical element not preserved by f")
    return problems


def check_amalgamation(p: ForcingCondition, q: ForcingCondition, f: Mapping[int, int],
                       oracle: RankedModelOracle) -> ValidationReport:
    """Preconditions of amalgamation, one issue per violation"""
    report = ValidationReport(subject="amalgamation")
    if p.n != q.n:
        report.add("level", f"levels differ: {p.n} and {q.n}")
    if set(f) != set(p.eta) or sorted(f.values()) != q.w:
        report.add("bijection", "f is not a bijection from w^p onto w^q")
        return report
    images = [f[a] for a in p.w]
    if any(x >= y for x, y in zip(images, images[1:])):
        report.add("order", "f is not order-preserving", witness=images)
    root = set(p.eta) & set(q.eta)
    for a in sorted(root):
        if f[a] != a:
            report.add("root", f"f moves root element {a} to {f[a]}", witness=a)
    for a in p.w:
        if q.eta.get(f[a]) != p.eta[a]:
            report.add("coherence", f"eta^q(f({a})) differs from eta^p({a})", witness=a)
    for a, b in itertools.combinations(p.w, 2):
        if q.g.get(pair(f[a], f[b])) != p.color(a, b):
            report.add("coherence", f"g^q(f({a}), f({b})) differs from g^p({a}, {b})", witness=(a, b))
    for problem in _oracle_disagreements(p.w, f, oracle):
        report.add("oracle-agreement", problem)
    return report


def amalgamate(p: ForcingCondition, q: ForcingCondition, f: Mapping[int, int], oracle: RankedModelOracle,
               U: UniversalTree) -> ForcingCondition:
    """Common extension t >= p, q of two isomorphic conditions forming a delta-system, found inside U.

    Children x^0 carry the elements of w^p and x^1 the images f(x) of the
    elements outside the root; pairs between a p-only and a q-only element
    share one fresh color. Both conditions are zero-stepped together until
    the template is copied above them.

    Raises:
        PreconditionError: the pair is not amalgamable or U does not copy the template
        NotFoundError: U is too short
    """
    report = check_amalgamation(p, q, f, oracle)
    if not report.ok:
        raise PreconditionError("; ".join(issue.message for issue in report.issues))
    check_gamma(oracle, U)
    root = set(p.eta) & set(q.eta)
    order = p.w
    rest = [i for i, a in enumerate(order) if a not in root]
    if not rest:
        return zero_step(p, U)
    S = amalgamation_template(order, p.g, rest, f, oracle, U.gamma, U.cap)
    p = _lift_until_covered(p, S, U)
    e = U.extend(S, _roots_of(p))
    fresh = _fresh_label(p.g)
    eta = {a: e.f[(i, 0)] for i, a in enumerate(order)}
    eta.update({f[order[i]]: e.f[(i, 1)] for i in rest})
    g = dict(p.g)
    g.update(q.g)
    for i in rest:
        for j in rest:
            g[pair(order[i], f[order[j]])] = e.f_star[fresh]
    t = ForcingCondition(len(e.f[(rest[0], 1)]), eta, g)
    logger.debug(f"Amalgamated {len(p.eta)} + {len(rest)} elements at level {t.n}")
    return t


def relabel_condition(p: ForcingCondition, mapping: Mapping[int, int]) -> ForcingCondition:
    """Condition with element a renamed mapping[a], same eta values and colors"""
    return ForcingCondition(
        p.n,
        {mapping[a]: s for a, s in p.eta.items()},
        {pair(mapping[min(x)], mapping[max(x)]): k for x, k in p.g.items()},
    )


def delta_system(p: ForcingCondition, root: Sequence[int], oracle: RankedModelOracle) -> Iterator[
        Tuple[ForcingCondition, Dict[int, int]]]:
    """Relabelings of p fixing root, pairwise meeting exactly in root.

    Yields each condition with the order isomorphism from w^p onto it; only
    relabelings respecting the oracle's rank and critical data are kept.
    """
    root = set(root)
    if not root <= set(p.eta):
        raise PreconditionError("root must lie inside w^p")
    movable = [a for a in p.w if a not in root]
    free = [x for x in range(oracle.size) if x not in root]
    taken = set(movable)
    yield p, {a: a for a in p.w}
    for images in itertools.combinations(free, len(movable)):
        if taken & set(images):
            continue
        mapping = {a: a for a in root}
        mapping.update(zip(movable, images))
        if any(mapping[x] >= mapping[y] for x, y in zip(p.w, p.w[1:])):
            continue
        q = relabel_condition(p, mapping)
        if not check_amalgamation(p, q, mapping, oracle).ok:
            continue
        taken |= set(images)
        yield q, mapping


def forcing_height(oracle: RankedModelOracle, depth: int, cap: int = DEFAULT_CAP) -> int:
    """Least height of a forcing_universal tree on which generic_homogeneous reaches depth"""
    gamma = least_above(oracle.rank.values())
    n = 0
    for S in forcing_templates(oracle, gamma, cap):
        while not lemma_bounds(gamma, n + 1).admits(S):
            n += 1
        n += 1
    return max(n, depth) + 1
