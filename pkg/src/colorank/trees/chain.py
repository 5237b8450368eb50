"""
Colorank Splitting Chains - Finite fragments of perfect homogeneous sets
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional

from ..core.errors import BudgetExceeded, PreconditionError
from ..core.sequences import Seq
from .approximation import Approximation
from .coloring_tree import Label, LevelledTree, Subset, label_leq

logger = logging.getLogger(__name__)


@dataclass
class ChainResult:
    """Outcome of a splitting-chain search.

    On success `chain` holds a_0 < ... < a_depth. On failure it holds the
    longest chain reached and `frontier` is its last approximation.
    """

    success: bool
    chain: List[Approximation] = field(default_factory=list)
    frontier: Optional[Approximation] = None
    explored: int = 0

    @property
    def reached(self) -> int:
        return len(self.chain) - 1


class _Search:
    def __init__(self, tree: LevelledTree, budget: int):
        self.tree = tree
        self.budget = budget
        self.explored = 0
        self.best: List[Approximation] = []

    def tick(self) -> None:
        self.explored += 1
        if self.explored > self.budget:
            raise BudgetExceeded("splitting-chain candidates", self.budget)

    def candidates(self, a: Approximation, m: int) -> Iterator[Approximation]:
        """Approximations at level m in which every point of a.v splits exactly in two"""
        tree = self.tree
        points = tree.points(m)
        options = []
        for p in a.v:
            above = [s for s in points if s[: a.level] == p]
            if len(above) < 2:
                return
            options.append(list(itertools.combinations(above, 2)))
        lower = a.h_map()
        for picks in itertools.product(*options):
            members = tuple(sorted(s for pair in picks for s in pair))
            subsets = list(itertools.combinations(members, tree.arity))
            choices = []
            for u in subsets:
                labels = sorted(tree.labels(m, u), key=lambda x: (isinstance(x, int), x))
                low = tuple(sorted(s[: a.level] for s in u))
                if len(set(low)) == tree.arity:
                    labels = [label for label in labels if label_leq(lower[low], label)]
                if not labels:
                    break
                choices.append(labels)
            else:
                for choice in itertools.product(*choices):
                    self.tick()
                    yield Approximation(m, members, tuple(zip(subsets, choice)))

    def run(self, chain: List[Approximation], remaining: int) -> Optional[List[Approximation]]:
        if len(chain) > len(self.best):
            self.best = list(chain)
        if remaining == 0:
            return chain
        a = chain[-1]
        for m in range(a.level + 1, self.tree.height - remaining + 1):
            for b in self.candidates(a, m):
                found = self.run(chain + [b], remaining - 1)
                if found is not None:
                    return found
        return None


def extract_splitting_chain(tree: LevelledTree, a: Approximation, depth: int,
                            budget: int = 1_000_000) -> ChainResult:
    """Search a chain a = a_0 < ... < a_depth with every point splitting at each step.

    Args:
        tree: Host tree
        a: Starting approximation
        depth: Number of splitting steps
        budget: Guard on candidate approximations examined

    Returns:
        ChainResult with the chain or the deepest frontier reached
    """
    if depth < 0 or depth > tree.height - 1 - a.level:
        raise PreconditionError(f"depth {depth} exceeds the {tree.height - 1 - a.level} levels above {a}")
    search = _Search(tree, budget)
    found = search.run([a], depth)
    if found is not None:
        logger.info(f"Splitting chain of depth {depth} found from {a}")
        return ChainResult(success=True, chain=found, frontier=found[-1], explored=search.explored)
    logger.info(f"No splitting chain of depth {depth}; reached {len(search.best) - 1}")
    return ChainResult(success=False, chain=search.best, frontier=search.best[-1],
                       explored=search.explored)
