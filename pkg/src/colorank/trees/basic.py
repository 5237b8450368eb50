"""
Colorank Basic Trees - Pair coloring trees with integer colors
"""

import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from ..core.errors import PreconditionError
from ..core.report import ValidationReport
from ..core.sequences import Seq, constant, encode_seq
from .coloring_tree import ColoringTree, LevelledTree, TreeNode

Pair = Tuple[Seq, Seq]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BasicNode:
    """Triple (x, y, k), stored with x < y"""

    level: int
    x: Seq
    y: Seq
    k: int

    def __post_init__(self):
        if len(self.x) != self.level or len(self.y) != self.level:
            raise PreconditionError(f"node coordinates must have length {self.level}")
        if self.x == self.y:
            raise PreconditionError(f"node coordinates must differ: {encode_seq(self.x)}")
        if self.k < 0:
            raise PreconditionError("colors are naturals")
        if self.y < self.x:
            x, y = self.y, self.x
            object.__setattr__(self, "x", x)
            object.__setattr__(self, "y", y)

    @property
    def pair(self) -> Pair:
        return (self.x, self.y)

    def zero_extension(self) -> "BasicNode":
        return BasicNode(self.level + 1, self.x + (0,), self.y + (0,), self.k)

    def __str__(self) -> str:
        return f"bnode {self.level} x={encode_seq(self.x)} y={encode_seq(self.y)} k={self.k}"


class BasicColoringTree(LevelledTree):
    """Height-H truncation of a basic coloring tree"""

    arity = 2

    def __init__(self, height: int, min_level: int = 0, nodes: Optional[Iterable[BasicNode]] = None):
        super().__init__()
        if height < 1 or not 0 <= min_level < height:
            raise PreconditionError(f"bad height/min level {height}/{min_level}")
        self.height = height
        self.min_level = min_level
        self.levels: Dict[int, Set[BasicNode]] = defaultdict(set)
        for node in nodes or ():
            self.add_node(node)

    def add_node(self, node: BasicNode) -> None:
        if not self.min_level <= node.level < self.height:
            raise PreconditionError(f"node level {node.level} outside [{self.min_level}, {self.height})")
        self.levels[node.level].add(node)
        self._register(node.level, node.pair, node.k)

    def discard_node(self, node: BasicNode) -> None:
        self.levels[node.level].discard(node)
        labels = self._labels[node.level].get(node.pair)
        if labels is not None:
            labels.discard(node.k)
            if not labels:
                del self._labels[node.level][node.pair]

    def has_node(self, level: int, x: Seq, y: Seq, k: int) -> bool:
        return k in self.labels(level, (x, y))

    def nodes(self, level: int) -> List[BasicNode]:
        return sorted(self.levels.get(level, ()), key=lambda n: (n.x, n.y, n.k))

    def all_nodes(self) -> Iterator[BasicNode]:
        for level in self.level_range():
            yield from self.nodes(level)

    def node_count(self) -> int:
        return sum(len(nodes) for nodes in self.levels.values())

    def colors(self, level: Optional[int] = None) -> Set[int]:
        if level is not None:
            return {node.k for node in self.levels.get(level, ())}
        return {node.k for node in self.all_nodes()}

    def truncate(self, height: int) -> "BasicColoringTree":
        return BasicColoringTree(
            height, self.min_level, [node for node in self.all_nodes() if node.level < height]
        )

    def __repr__(self) -> str:
        return f"BasicColoringTree(H={self.height}, min={self.min_level}, nodes={self.node_count()})"


def validate_basic(tree: BasicColoringTree, color_bound: Optional[int] = None,
                   branching_bound: Optional[int] = None) -> ValidationReport:
    """Check upward extension with the same color, plus optional finiteness bounds.

    Downward closure is not required.
    """
    report = ValidationReport(subject="basic coloring tree")
    for n in tree.level_range():
        for m in range(n + 1, tree.height):
            reachable: Set[Tuple[Seq, Seq, int]] = set()
            for upper in tree.nodes(m):
                x, y = upper.x[:n], upper.y[:n]
                if x != y:
                    reachable.add((min(x, y), max(x, y), upper.k))
            for node in tree.nodes(n):
                if (node.x, node.y, node.k) not in reachable:
                    report.add(
                        "extension",
                        f"node at level {n} has no same-color extension at level {m}",
                        witness=(str(node), m),
                    )
        if color_bound is not None and len(tree.colors(n)) > color_bound:
            report.add("colors", f"level {n} uses {len(tree.colors(n))} colors", witness=n)
        if branching_bound is not None and n + 1 < tree.height:
            children: Dict[Seq, Set[Seq]] = defaultdict(set)
            for s in tree.support(n + 1):
                children[s[:n]].add(s)
            for parent, kids in children.items():
                if len(kids) > branching_bound:
                    report.add("branching", f"{encode_seq(parent)} has {len(kids)} children",
                               witness=parent)
    return report


def basic_from_closed(pair_sets: Sequence[Iterable[Pair]], height: int) -> BasicColoringTree:
    """Basic tree of a finite family of closed pair sets.

    Args:
        pair_sets: pair_sets[k] lists the pairs of C_k as strings of length height-1
            (longer strings are cut, shorter ones must be restrictions of listed pairs)
        height: Truncation height

    Returns:
        Tree with (x|n, y|n, k) for {x, y} in C_k, k <= n < height, x|n != y|n
    """
    tree = BasicColoringTree(height)
    top = height - 1
    for k, pairs in enumerate(pair_sets):
        pairs = [(tuple(x), tuple(y)) for x, y in pairs]
        full = [(x[:top], y[:top]) for x, y in pairs if len(x) >= top]
        for x, y in pairs:
            if len(x) != len(y):
                raise PreconditionError(f"pair members of different lengths in C_{k}")
            if len(x) < top and not any(fx[: len(x)] == x and fy[: len(y)] == y or
                                        fx[: len(x)] == y and fy[: len(y)] == x for fx, fy in full):
                raise PreconditionError(
                    f"C_{k} is not restriction-closed: {encode_seq(x)},{encode_seq(y)} has no leaf"
                )
        for x, y in full:
            for n in range(k, height):
                if x[:n] != y[:n]:
                    tree.add_node(BasicNode(n, x[:n], y[:n], k))
    logger.debug(f"basic_from_closed: {tree}")
    return tree


def induced_pairs(tree: BasicColoringTree, k: int) -> Set[FrozenSet[Seq]]:
    """Pairs colored k at the top level"""
    top = tree.height - 1
    return {frozenset(node.pair) for node in tree.nodes(top) if node.k == k}


def basic_to_general(tree: BasicColoringTree) -> ColoringTree:
    """N=2 general tree with witness k^n for every node (x, y, k)"""
    general = ColoringTree(2, tree.height, tree.min_level)
    for node in tree.all_nodes():
        general.add_node(TreeNode(node.level, node.pair, constant(node.k, node.level)))
    return general
