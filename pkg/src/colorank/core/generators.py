"""
Colorank Generators - Named fixtures and seeded random corpora
"""

import itertools
import random
from typing import List, Set, Tuple

from .sequences import Seq, zeros


def binary_strings(n: int) -> List[Seq]:
    return [tuple(bits) for bits in itertools.product((0, 1), repeat=n)]


def full_constant_tree(arity: int, height: int):
    """All (v, 0^n) with v an N-subset of 2^n, from the first level holding N strings"""
    from ..trees.coloring_tree import ColoringTree, TreeNode

    start = max(1, (arity - 1).bit_length())
    tree = ColoringTree(arity, height, min_level=min(start, height - 1))
    for n in range(start, height):
        for v in itertools.combinations(binary_strings(n), arity):
            tree.add_node(TreeNode(n, v, zeros(n)))
    return tree


def full_binary_tree(height: int):
    """B(H): every pair of distinct binary strings colored by 0^n, levels 1..H-1"""
    return full_constant_tree(2, height)


def two_branch_tree(height: int):
    """L(H): the single pair {0^n, 1^n} with witness 0^n at each level 1..H-1"""
    from ..trees.coloring_tree import ColoringTree, TreeNode

    tree = ColoringTree(2, height, min_level=1)
    for n in range(1, height):
        tree.add_node(TreeNode(n, (zeros(n), (1,) * n), zeros(n)))
    return tree


def basic_full_binary(height: int, color: int = 0):
    from ..trees.basic import BasicColoringTree, BasicNode

    tree = BasicColoringTree(height, min_level=1)
    for n in range(1, height):
        for x, y in itertools.combinations(binary_strings(n), 2):
            tree.add_node(BasicNode(n, x, y, color))
    return tree


def basic_two_branch(height: int, color: int = 0):
    from ..trees.basic import BasicColoringTree, BasicNode

    tree = BasicColoringTree(height, min_level=1)
    for n in range(1, height):
        tree.add_node(BasicNode(n, zeros(n), (1,) * n, color))
    return tree


def random_support(rng: random.Random, height: int, branching: int = 3) -> List[List[Seq]]:
    """Random finitely branching tree; entry n lists its level-n elements"""
    levels: List[List[Seq]] = [[()]]
    for _ in range(1, height):
        nxt = []
        for s in levels[-1]:
            for child in range(rng.randint(1, branching)):
                nxt.append(s + (child,))
        levels.append(nxt)
    return levels


def random_coloring_tree(rng: random.Random, height: int, arity: int = 2, branching: int = 3,
                         sets: int = 6, alphabet: int = 2):
    """Random tree whose nodes are the distinct restrictions of random top-level N-sets"""
    from ..trees.coloring_tree import ColoringTree, TreeNode

    levels = random_support(rng, height, branching)
    top = levels[-1]
    tree = ColoringTree(arity, height, min_level=1 if height > 1 else 0)
    if len(top) < arity or height < 2:
        return tree
    for _ in range(sets):
        v = tuple(sorted(rng.sample(top, arity)))
        t = tuple(rng.randrange(alphabet) for _ in range(height - 1))
        start = rng.randint(1, height - 1)
        for n in range(start, height):
            lowered = tuple(s[:n] for s in v)
            if len(set(lowered)) == arity:
                tree.add_node(TreeNode(n, lowered, t[:n]))
    return tree


def random_basic_tree(rng: random.Random, height: int, branching: int = 3, pairs: int = 6,
                      colors: int = 2):
    """Random basic tree: random top pairs carried from a random start level"""
    from ..trees.basic import BasicColoringTree, BasicNode

    levels = random_support(rng, height, branching)
    top = levels[-1]
    tree = BasicColoringTree(height, min_level=1 if height > 1 else 0)
    if len(top) < 2 or height < 2:
        return tree
    for _ in range(pairs):
        x, y = rng.sample(top, 2)
        k = rng.randrange(colors)
        start = rng.randint(1, height - 1)
        for n in range(start, height):
            if x[:n] != y[:n]:
                tree.add_node(BasicNode(n, x[:n], y[:n], k))
    return tree


def random_pair_coloring(rng: random.Random, height: int, pairs: int = 20, mmax: int = 4,
                         arity: int = 2) -> List[Set[Tuple[Seq, ...]]]:
    """Random C_0..C_{mmax-1} of N-subsets of 2^height"""
    strings = binary_strings(height)
    coloring: List[Set[Tuple[Seq, ...]]] = [set() for _ in range(mmax)]
    for _ in range(pairs):
        subset = tuple(sorted(rng.sample(strings, arity)))
        coloring[rng.randrange(mmax)].add(subset)
    return coloring


def empty_model(size: int):
    from ..model.finite_model import FiniteModel

    return FiniteModel(size)


def random_graph_model(rng: random.Random, size: int, density: float = 0.4, name: str = "E"):
    """Model with one binary relation of random pairs (loops allowed)"""
    from ..model.finite_model import FiniteModel

    tuples = {(a, b) for a in range(size) for b in range(size) if rng.random() < density}
    return FiniteModel(size, {name: 2}, {name: tuples})
