"""
Colorank Coloring Trees - Finite truncations of N-coloring trees
"""

import logging
from abc import ABC, abstractmethod
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple, Union

from ..core.errors import PreconditionError
from ..core.report import ValidationReport
from ..core.sequences import Seq, encode_seq, is_prefix

Label = Union[Seq, int]
Subset = Tuple[Seq, ...]


def label_leq(a: Label, b: Label) -> bool:
    """Order on witness labels: prefix for sequences, equality for colors"""
    if isinstance(a, int):
        return a == b
    return isinstance(b, tuple) and is_prefix(a, b)


class LevelledTree(ABC):
    """Common read interface of general and basic coloring trees.

    Subclasses store nodes per level; this base answers the queries used by
    approximation enumeration and the rank engine.
    """

    arity: int
    height: int
    min_level: int

    def __init__(self):
        self._labels: Dict[int, Dict[Subset, Set[Label]]] = defaultdict(lambda: defaultdict(set))

    @abstractmethod
    def node_count(self) -> int:
        ...

    def level_range(self) -> range:
        return range(self.min_level, self.height)

    def _register(self, level: int, subset: Subset, label: Label) -> None:
        self._labels[level][subset].add(label)

    def labels(self, level: int, subset: Iterable[Seq]) -> FrozenSet[Label]:
        key = tuple(sorted(subset))
        return frozenset(self._labels.get(level, {}).get(key, ()))

    def colored_subsets(self, level: int) -> List[Subset]:
        return sorted(self._labels.get(level, {}).keys())

    def points(self, level: int) -> List[Seq]:
        """Sequences occurring in some node at this level"""
        found: Set[Seq] = set()
        for subset in self._labels.get(level, {}):
            found.update(subset)
        return sorted(found)

    def support(self, level: int) -> List[Seq]:
        """Prefix closure of node coordinates, cut at the given level"""
        found: Set[Seq] = set()
        for m in range(max(level, self.min_level), self.height):
            for s in self.points(m):
                found.add(s[:level])
        return sorted(found)

    def is_empty(self) -> bool:
        return self.node_count() == 0


@dataclass(frozen=True)
class TreeNode:
    """Node (v, t): an N-set of length-n sequences with a length-n witness"""

    level: int
    v: Subset
    t: Seq

    def __post_init__(self):
        if tuple(sorted(self.v)) != self.v:
            object.__setattr__(self, "v", tuple(sorted(self.v)))
        if len(set(self.v)) != len(self.v):
            raise PreconditionError(f"node members must be distinct: {self.v}")
        if any(len(s) != self.level for s in self.v) or len(self.t) != self.level:
            raise PreconditionError(f"node lengths must equal level {self.level}")

    def restrict(self, n: int) -> Optional["TreeNode"]:
        """Restriction to level n, None when members collide"""
        v = tuple(s[:n] for s in self.v)
        if len(set(v)) != len(v):
            return None
        return TreeNode(n, v, self.t[:n])

    def __str__(self) -> str:
        members = ",".join(encode_seq(s) for s in self.v)
        return f"gnode {self.level} t={encode_seq(self.t)} v={members}"


class ColoringTree(LevelledTree):
    """Height-H truncation of an N-coloring tree"""

    def __init__(self, arity: int, height: int, min_level: int = 0,
                 nodes: Optional[Iterable[TreeNode]] = None):
        super().__init__()
        if arity < 2:
            raise PreconditionError("arity must be at least 2")
        if height < 1 or not 0 <= min_level < height:
            raise PreconditionError(f"bad height/min level {height}/{min_level}")
        self.arity = arity
        self.height = height
        self.min_level = min_level
        self.levels: Dict[int, Set[TreeNode]] = defaultdict(set)
        self.logger = logging.getLogger(__name__)
        for node in nodes or ():
            self.add_node(node)

    def add_node(self, node: TreeNode) -> None:
        if not self.min_level <= node.level < self.height:
            raise PreconditionError(f"node level {node.level} outside [{self.min_level}, {self.height})")
        if len(node.v) != self.arity:
            raise PreconditionError(f"node has {len(node.v)} members, arity is {self.arity}")
        self.levels[node.level].add(node)
        self._register(node.level, node.v, node.t)

    def discard_node(self, node: TreeNode) -> None:
        """Remove a node; used to build damaged fixtures"""
        self.levels[node.level].discard(node)
        labels = self._labels[node.level].get(node.v)
        if labels is not None:
            labels.discard(node.t)
            if not labels:
                del self._labels[node.level][node.v]

    def nodes(self, level: int) -> List[TreeNode]:
        return sorted(self.levels.get(level, ()), key=lambda n: (n.v, n.t))

    def all_nodes(self) -> Iterator[TreeNode]:
        for level in self.level_range():
            yield from self.nodes(level)

    def node_count(self) -> int:
        return sum(len(nodes) for nodes in self.levels.values())

    def truncate(self, height: int) -> "ColoringTree":
        if height <= self.min_level:
            raise PreconditionError(f"cannot truncate below min level {self.min_level}")
        return ColoringTree(
            self.arity, height, self.min_level,
            [node for node in self.all_nodes() if node.level < height],
        )

    def __repr__(self) -> str:
        return f"ColoringTree(N={self.arity}, H={self.height}, min={self.min_level}, nodes={self.node_count()})"


def validate_tree(tree: ColoringTree) -> ValidationReport:
    """Report every node without an extension at some higher level"""
    report = ValidationReport(subject="coloring tree")
    # for each (m, n): restrictions of level-m nodes to level n
    for n in tree.level_range():
        for m in range(n + 1, tree.height):
            reachable: Set[Tuple[Subset, Seq]] = set()
            for upper in tree.nodes(m):
                lowered = upper.restrict(n)
                if lowered is not None:
                    reachable.add((lowered.v, lowered.t))
            for node in tree.nodes(n):
                if (node.v, node.t) not in reachable:
                    report.add(
                        "extension",
                        f"node at level {n} has no extension at level {m}",
                        witness=(str(node), m),
                    )
    tree.logger.debug(f"validate_tree: {report.summary()}")
    return report
