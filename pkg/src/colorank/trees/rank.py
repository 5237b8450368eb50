"""
Colorank Rank - Approximation rank on finite truncations
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import networkx as nx

from ..core.errors import BudgetExceeded, PreconditionError
from .approximation import (
    DEFAULT_BUDGET,
    DEFAULT_CAP,
    Approximation,
    approx_leq,
    approximations,
    h_compatible,
    restriction_of,
    splits,
)
from .coloring_tree import LevelledTree


@dataclass
class RankReport:
    """Rank of every approximation plus the rank of the tree"""

    assignment: Dict[Approximation, int] = field(default_factory=dict)
    tree_rank: int = 0

    def value(self, a: Approximation) -> int:
        return self.assignment[a]

    def sorted_items(self) -> List[Tuple[Approximation, int]]:
        return sorted(self.assignment.items(), key=lambda item: (item[0].level, item[0].key()))


class RankEngine:
    """Approximation poset of a truncation, held as a networkx DAG.

    Edges a -> b exist for a < b and carry the set of points of a.v that
    split in b. Ranks are filled in reverse topological order.
    """

    def __init__(self, tree: LevelledTree, cap: int = DEFAULT_CAP, budget: int = DEFAULT_BUDGET):
        self.tree = tree
        self.cap = cap
        self.budget = budget
        self.logger = logging.getLogger(__name__)
        self.by_level: Dict[int, List[Approximation]] = {}
        self._index: Dict[Tuple[int, Tuple], List[Approximation]] = defaultdict(list)
        self._graph: Optional[nx.DiGraph] = None
        self._values: Optional[Dict[Approximation, int]] = None
        self._enumerate()

    def _enumerate(self) -> None:
        total = 0
        for n in self.tree.level_range():
            found = approximations(self.tree, n, self.cap, self.budget - total)
            total += len(found)
            if total > self.budget:
                raise BudgetExceeded("approximations", self.budget)
            self.by_level[n] = found
            for b in found:
                for m in range(self.tree.min_level, n):
                    lowered = restriction_of(b.v, m)
                    if len(lowered) >= self.tree.arity:
                        self._index[(m, lowered)].append(b)
        self.logger.info(f"Enumerated {total} approximations over {len(self.by_level)} levels")

    def all(self) -> List[Approximation]:
        return [a for n in sorted(self.by_level) for a in self.by_level[n]]

    def successors(self, a: Approximation) -> List[Approximation]:
        return [b for b in self._index.get((a.level, a.v), ()) if h_compatible(a, b)]

    @property
    def graph(self) -> nx.DiGraph:
        if self._graph is None:
            graph = nx.DiGraph()
            for a in self.all():
                graph.add_node(a, level=a.level)
            for a in self.all():
                for b in self.successors(a):
                    graph.add_edge(a, b, split=frozenset(p for p in a.v if splits(p, b)))
            self.logger.debug(f"Approximation DAG: {graph.number_of_nodes()} nodes, {graph.number_of_edges()} edges")
            self._graph = graph
        return self._graph

    def values(self) -> Dict[Approximation, int]:
        if self._values is None:
            graph = self.graph
            values: Dict[Approximation, int] = {}
            for a in reversed(list(nx.topological_sort(graph))):
                best = None
                for p in a.v:
                    top = -1
                    for b in graph.successors(a):
                        if p in graph.edges[a, b]["split"] and values[b] > top:
                            top = values[b]
                    if best is None or 1 + top < best:
                        best = 1 + top
                values[a] = best if best is not None else 0
            self._values = values
        return self._values

    def rank(self, a: Approximation) -> int:
        values = self.values()
        if a not in values:
            raise PreconditionError(f"{a} is not an approximation of this tree within cap {self.cap}")
        return values[a]

    def critical_points(self, a: Approximation) -> List:
        """Points of a.v realizing the minimum in the rank recursion"""
        values = self.values()
        graph = self.graph
        target = values[a]
        result = []
        for p in a.v:
            top = -1
            for b in graph.successors(a):
                if p in graph.edges[a, b]["split"]:
                    top = max(top, values[b])
            if 1 + top == target:
                result.append(p)
        return result

    def report(self) -> RankReport:
        values = self.values()
        tree_rank = max((value + 1 for value in values.values()), default=0)
        return RankReport(assignment=dict(values), tree_rank=tree_rank)


def rank_all(tree: LevelledTree, cap: int = DEFAULT_CAP, budget: int = DEFAULT_BUDGET) -> RankReport:
    """Rank every approximation of the truncation"""
    return RankEngine(tree, cap, budget).report()


def rank_oracle(tree: LevelledTree, a: Approximation, cap: int = DEFAULT_CAP,
                budget: int = DEFAULT_BUDGET, memo: Optional[Dict[Approximation, int]] = None) -> int:
    """Direct memoized recursion on the rank definition.

    rk(a) >= k+1 iff every p in a.v splits in some b > a with rk(b) >= k.
    Pass the same memo across calls on one tree to share work.
    """
    pool: Dict[int, List[Approximation]] = {}
    memo = {} if memo is None else memo

    def above(level: int) -> List[Approximation]:
        found = []
        for m in range(level + 1, tree.height):
            if m not in pool:
                pool[m] = approximations(tree, m, cap, budget)
            found.extend(pool[m])
        return found

    def value(x: Approximation) -> int:
        if x in memo:
            return memo[x]
        bigger = [b for b in above(x.level) if approx_leq(x, b)]
        result = None
        for p in x.v:
            witnessed = [value(b) for b in bigger if splits(p, b)]
            candidate = 1 + max(witnessed, default=-1)
            result = candidate if result is None else min(result, candidate)
        memo[x] = 0 if result is None else result
        return memo[x]

    return value(a)
