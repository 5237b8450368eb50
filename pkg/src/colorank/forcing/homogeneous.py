"""
Colorank Homogeneous Families - Generic chains through the dense sets and rank domination
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional

from ..core.errors import PreconditionError
from ..core.ordinal import OrdinalCNF
from ..core.report import ValidationReport
from ..core.sequences import Seq, constant, encode_seq
from ..model.rank import RankedModelOracle
from ..trees.approximation import DEFAULT_BUDGET, DEFAULT_CAP, approx_from_family
from ..trees.basic import BasicColoringTree, basic_to_general
from ..trees.rank import RankEngine
from ..trees.ranked import RankedTree
from ..universal.builder import UniversalTree
from .condition import ForcingCondition, Pair, pair
from .poset import check_gamma, extend_into_dense

logger = logging.getLogger(__name__)


@dataclass
class FamilyResult:
    """Branches eta, pair colors, first common levels and the condition chain"""

    eta: Dict[int, Seq] = field(default_factory=dict)
    colors: Dict[Pair, int] = field(default_factory=dict)
    n0: Dict[Pair, int] = field(default_factory=dict)
    chain: List[ForcingCondition] = field(default_factory=list)

    @property
    def height(self) -> int:
        return max((len(s) for s in self.eta.values()), default=0)

    def certificate(self, U: RankedTree, upto: Optional[int] = None) -> ValidationReport:
        """Every pair's color is a node at each level from n0 up to `upto` (default: the family height)"""
        report = ValidationReport(subject="homogeneity certificate")
        top = self.height if upto is None else min(upto, self.height)
        for a, b in itertools.combinations(sorted(self.eta), 2):
            key = pair(a, b)
            for n in range(self.n0[key], top + 1):
                x, y = sorted((self.eta[a][:n], self.eta[b][:n]))
                if x == y or not U.base.has_node(n, x, y, self.colors[key]):
                    report.add("certificate", f"pair {a},{b} not colored {self.colors[key]} at level {n}",
                               witness=(a, b, n))
                    break
        return report

    def describe(self) -> List[str]:
        lines = [f"eta {a} {encode_seq(s)}" for a, s in sorted(self.eta.items())]
        lines += [f"g {min(p)},{max(p)} {k}" for p, k in sorted(self.colors.items(), key=lambda i: sorted(i[0]))]
        lines += [f"cert {min(p)},{max(p)} n0={n}" for p, n in sorted(self.n0.items(), key=lambda i: sorted(i[0]))]
        return lines


def generic_homogeneous(oracle: RankedModelOracle, U: UniversalTree, depth: int) -> FamilyResult:
    """Meet every dense set D(alpha, n) with n <= depth, level by level, from the empty condition.

    All elements enter at the first target, in increasing order, so each
    step uses one of the adjoining templates of forcing_universal.

    Args:
        oracle: Rank oracle on a finite universe
        U: Universal tree, read only
        depth: Least level the family reaches

    Returns:
        The family with its colors, certificate levels and the chain of conditions

    Raises:
        NotFoundError: U is too short for the family
    """
    if depth < 0:
        raise PreconditionError("depth must be non-negative")
    check_gamma(oracle, U)
    p = ForcingCondition()
    result = FamilyResult(chain=[p])
    for target in range(depth + 1):
        for alpha in range(oracle.size):
            q = extend_into_dense(p, alpha, target, oracle, U)
            if q is not p:
                result.chain.append(q)
                for key in q.g:
                    result.n0.setdefault(key, q.n)
                if alpha not in p.eta:
                    logger.info(f"Element {alpha} placed at level {q.n}")
            p = q
    result.eta = dict(p.eta)
    result.colors = dict(p.g)
    return result


def _cone(T: RankedTree, points: Iterable[Seq], level: int) -> BasicColoringTree:
    """Nodes of T from `level` up whose members extend the given points' restrictions"""
    roots = {s[:level] for s in points}
    nodes = [
        node
        for m in range(max(level, T.base.min_level), T.height)
        for node in T.base.nodes(m)
        if node.x[:level] in roots and node.y[:level] in roots
    ]
    return BasicColoringTree(T.height, level, nodes)


class _Certifier:
    """Rank witnessed by the family itself: successors add a member branching off after m(w)"""

    def __init__(self, family: FamilyResult, cap: int):
        self.family = family
        self.cap = cap
        self.memo: Dict[frozenset, int] = {}

    def level(self, w: Iterable[int]) -> int:
        return max(self.family.n0[pair(a, b)] for a, b in itertools.combinations(sorted(w), 2))

    def value(self, w: frozenset) -> int:
        if w in self.memo:
            return self.memo[w]
        m = self.level(w)
        eta, colors = self.family.eta, self.family.colors
        best = None
        for beta in sorted(w):
            top = -1
            if len(w) < self.cap:
                for extra in sorted(set(eta) - w):
                    if eta[extra][:m] != eta[beta][:m]:
                        continue
                    if any(colors[pair(extra, x)] != colors[pair(beta, x)] for x in w if x != beta):
                        continue
                    top = max(top, self.value(w | {extra}))
            best = 1 + top if best is None else min(best, 1 + top)
        self.memo[w] = best or 0
        return self.memo[w]


def verify_domination(T: RankedTree, family: FamilyResult, oracle: RankedModelOracle, cap: int = DEFAULT_CAP,
                      budget: int = DEFAULT_BUDGET) -> ValidationReport:
    """Truncation rank of each determined approximation against the oracle.

    For every subset w with 2 <= |w| <= cap, the approximation determined by
    w at its level m(w) must have truncation rank at least
    min(oracle rank, rank certifiable inside the family).
    """
    report = ValidationReport(subject="rank domination")
    elements = sorted(family.eta)
    if len(elements) < 2:
        report.notes.append("fewer than two members")
        return report
    low = min(family.n0.values())
    cone = basic_to_general(_cone(T, family.eta.values(), low))
    engine = RankEngine(cone, cap, budget)
    values = engine.values()
    certifier = _Certifier(family, cap)
    for size in range(2, min(cap, len(elements)) + 1):
        for w in itertools.combinations(elements, size):
            m = certifier.level(w)
            witnesses = {
                (family.eta[a], family.eta[b]): constant(family.colors[pair(a, b)], len(family.eta[a]))
                for a, b in itertools.combinations(w, 2)
            }
            try:
                a = approx_from_family(cone, [family.eta[x] for x in w], witnesses, m)
            except PreconditionError as e:
                report.add("construction", str(e), witness=list(w))
                continue
            rank = values.get(a)
            if rank is None:
                report.add("construction", "determined approximation is not enumerated", witness=list(w))
                continue
            expected = oracle.rank_of(w)
            certifiable = certifier.value(frozenset(w))
            bound = OrdinalCNF.of(certifiable) if expected is None else min(expected, OrdinalCNF.of(certifiable))
            verdict = "FAIL" if OrdinalCNF.of(rank) < bound else "ok"
            report.notes.append(
                f"w={','.join(map(str, w))} m={m} rank={rank} oracle={expected if expected is not None else '-'} "
                f"certifiable={certifiable} {verdict}"
            )
            if verdict == "FAIL":
                report.add("domination", f"truncation rank {rank} below {bound}", witness=list(w))
    logger.info(f"verify_domination: {report.summary()}")
    return report
