"""
Colorank Conditions - Forcing conditions over a universal tree and their order
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Tuple

from ..core.sequences import Seq, encode_seq
from ..core.report import ValidationReport
from ..model.rank import RankedModelOracle
from ..trees.approximation import Approximation
from ..trees.ranked import RankedTree

logger = logging.getLogger(__name__)

Pair = FrozenSet[int]


def pair(a: int, b: int) -> Pair:
    return frozenset((a, b))


@dataclass
class ForcingCondition:
    """(eta, w, n, g): w is the key set of eta, every eta value has length n"""

    n: int = 0
    eta: Dict[int, Seq] = field(default_factory=dict)
    g: Dict[Pair, int] = field(default_factory=dict)

    @property
    def w(self) -> List[int]:
        return sorted(self.eta)

    def color(self, a: int, b: int) -> int:
        return self.g[pair(a, b)]

    def approximation(self, v: Iterable[int]) -> Approximation:
        """The approximation (eta[v], g^v) at level n"""
        v = sorted(v)
        return Approximation.build(
            self.n,
            [self.eta[a] for a in v],
            {(self.eta[a], self.eta[b]): self.color(a, b) for a, b in itertools.combinations(v, 2)},
        )

    def key(self) -> Tuple:
        return (
            self.n,
            tuple(sorted(self.eta.items())),
            tuple(sorted((tuple(sorted(p)), k) for p, k in self.g.items())),
        )

    def describe(self) -> List[str]:
        lines = [f"cond n={self.n}"]
        lines += [f"eta {a} {encode_seq(s)}" for a, s in sorted(self.eta.items())]
        lines += [f"g {min(p)},{max(p)} {k}" for p, k in sorted(self.g.items(), key=lambda item: sorted(item[0]))]
        return lines


def validate_condition(p: ForcingCondition, oracle: RankedModelOracle, U: RankedTree) -> ValidationReport:
    """Branch shape, node membership and rank / critical coherence.

    Rank coherence ranges over subsets of size at least 2 lying in the oracle's domain.
    """
    report = ValidationReport(subject="forcing condition")
    images: Dict[Seq, int] = {}
    support = set(U.support(p.n)) if p.n < U.height else set()
    for a, s in sorted(p.eta.items()):
        if not 0 <= a < oracle.size:
            report.add("branches", f"element {a} outside the universe", witness=a)
        if len(s) != p.n:
            report.add("branches", f"eta({a}) has length {len(s)}, expected {p.n}", witness=a)
        elif s not in support:
            report.add("branches", f"eta({a}) = {encode_seq(s)} is not in the level-{p.n} support", witness=a)
        if s in images:
            report.add("branches", f"eta({images[s]}) = eta({a})", witness=(images[s], a))
        images[s] = a
    expected = {pair(a, b) for a, b in itertools.combinations(p.w, 2)}
    if set(p.g) != expected:
        report.add("branches", "g is not a total map on the pairs of w",
                   witness=sorted(sorted(x) for x in set(p.g) ^ expected))
    if not report.ok:
        return report
    for a, b in itertools.combinations(p.w, 2):
        if not U.base.has_node(p.n, *sorted((p.eta[a], p.eta[b])), p.color(a, b)):
            report.add("colors", f"({encode_seq(p.eta[a])}, {encode_seq(p.eta[b])}, {p.color(a, b)}) is not a node",
                       witness=(a, b))
    if not report.ok:
        return report
    for size in range(2, len(p.w) + 1):
        for v in itertools.combinations(p.w, size):
            expected_rank = oracle.rank_of(v)
            if expected_rank is None:
                continue
            a = p.approximation(v)
            if a not in U.r:
                report.add("ranks", "image approximation carries no rank", witness=list(v))
                continue
            if not expected_rank <= U.r[a]:
                report.add("ranks", f"rank {expected_rank} exceeds r = {U.r[a]}", witness=list(v))
            if p.eta[oracle.critical_of(v)] != U.c[a]:
                report.add("ranks", "critical element not mapped to c", witness=list(v))
    return report


def cond_leq(p: ForcingCondition, q: ForcingCondition) -> bool:
    """q extends p"""
    if p.n > q.n or not set(p.eta) <= set(q.eta):
        return False
    if any(q.eta[a][: p.n] != s for a, s in p.eta.items()):
        return False
    return all(q.g.get(x) == k for x, k in p.g.items())
