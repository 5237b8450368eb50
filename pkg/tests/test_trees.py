"""
Tests for coloring trees, approximations, ranks, splitting chains and ranked trees
"""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from colorank.core.errors import BudgetExceeded, PreconditionError
from colorank.core.generators import random_basic_tree, random_coloring_tree
from colorank.core.ordinal import OrdinalCNF
from colorank.core.sequences import zeros
from colorank.trees.approximation import Approximation, approx_from_family, approx_leq, approximations
from colorank.trees.basic import (
    BasicColoringTree,
    BasicNode,
    basic_from_closed,
    basic_to_general,
    induced_pairs,
    validate_basic,
)
from colorank.trees.chain import extract_splitting_chain
from colorank.trees.coloring_tree import ColoringTree, TreeNode, validate_tree
from colorank.trees.rank import RankEngine, rank_all, rank_oracle
from colorank.trees.ranked import check_rank_bound, derive_ranked, validate_ranked


def test_full_binary_tree_ranks(b4):
    report = rank_all(b4)
    assert report.tree_rank == 3
    for a, value in report.assignment.items():
        assert value == {1: 2, 2: 1, 3: 0}[a.level]


def test_two_branch_tree_has_rank_one(l4):
    report = rank_all(l4)
    assert report.tree_rank == 1
    assert set(report.assignment.values()) == {0}


def test_engine_matches_direct_recursion(b4):
    engine = RankEngine(b4)
    memo = {}
    for a, value in engine.values().items():
        assert rank_oracle(b4, a, memo=memo) == value


@pytest.mark.property_based
@given(st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_engine_matches_direct_recursion_on_random_trees(seed):
    tree = random_coloring_tree(random.Random(seed), height=4, branching=2, sets=4)
    engine = RankEngine(tree, cap=4)
    memo = {}
    for a, value in engine.values().items():
        assert rank_oracle(tree, a, cap=4, memo=memo) == value


def test_approximation_enumeration_respects_cap(b4):
    found = approximations(b4, 3, cap=3)
    assert {a.size for a in found} == {2, 3}
    assert len(found) == 28 + 56
    with pytest.raises(PreconditionError):
        approximations(b4, 3, cap=1)


def test_approximation_budget(b4):
    with pytest.raises(BudgetExceeded):
        approximations(b4, 3, cap=6, budget=10)


def test_approximation_order(b4):
    low = Approximation.build(1, [(0,), (1,)], {((0,), (1,)): (0,)})
    high = Approximation.build(2, [(0, 1), (1, 0)], {((0, 1), (1, 0)): (0, 0)})
    assert approx_leq(low, high)
    assert not approx_leq(high, low)
    wrong = Approximation.build(2, [(0, 1), (1, 0)], {((0, 1), (1, 0)): (1, 0)})
    assert not approx_leq(low, wrong)


def test_approximation_from_family(b4):
    points = [(0, 0, 1), (1, 1, 0)]
    witnesses = {tuple(points): zeros(3)}
    a = approx_from_family(b4, points, witnesses, 2)
    assert a.v == ((0, 0), (1, 1))
    assert a.h == ((((0, 0), (1, 1)), (0, 0)),)
    with pytest.raises(PreconditionError):
        approx_from_family(b4, [(0, 0, 1), (0, 0, 0)], {((0, 0, 0), (0, 0, 1)): zeros(3)}, 2)


def test_validate_tree_detects_missing_extension(l4):
    assert validate_tree(l4).ok
    l4.discard_node(TreeNode(3, ((0, 0, 0), (1, 1, 1)), zeros(3)))
    report = validate_tree(l4)
    assert report.kinds() == ["extension"]
    assert len(report) == 2


def test_tree_rejects_bad_nodes():
    tree = ColoringTree(2, 3, 1)
    with pytest.raises(PreconditionError):
        tree.add_node(TreeNode(1, ((0,), (0,)), (0,)))
    with pytest.raises(PreconditionError):
        tree.add_node(TreeNode(3, ((0, 0, 0), (1, 1, 1)), zeros(3)))
    with pytest.raises(PreconditionError):
        ColoringTree(1, 3)


def test_splitting_chain_in_full_binary_tree(b4):
    start = approximations(b4, 1)[0]
    result = extract_splitting_chain(b4, start, 2)
    assert result.success
    assert [a.level for a in result.chain] == [1, 2, 3]
    assert [a.size for a in result.chain] == [2, 4, 8]
    for lower, upper in zip(result.chain, result.chain[1:]):
        assert approx_leq(lower, upper)
        assert all(len(upper.extensions_of(p)) == 2 for p in lower.v)


def test_splitting_chain_depth_bounds(b4, l4):
    with pytest.raises(PreconditionError):
        extract_splitting_chain(b4, approximations(b4, 1)[0], 3)
    result = extract_splitting_chain(l4, approximations(l4, 1)[0], 1)
    assert not result.success
    assert result.reached == 0
    assert result.frontier == approximations(l4, 1)[0]


def test_basic_tree_ranks_match_general_tree(basic_b4):
    assert rank_all(basic_b4).tree_rank == rank_all(basic_to_general(basic_b4)).tree_rank == 3


@pytest.mark.property_based
@given(st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_basic_and_general_ranks_agree_on_random_trees(seed):
    tree = random_basic_tree(random.Random(seed), height=4, branching=2, pairs=4)
    assert rank_all(tree, cap=4).tree_rank == rank_all(basic_to_general(tree), cap=4).tree_rank


def test_basic_node_normalizes_order():
    node = BasicNode(2, (1, 0), (0, 1), 3)
    assert node.pair == ((0, 1), (1, 0))
    assert node.zero_extension() == BasicNode(3, (0, 1, 0), (1, 0, 0), 3)
    with pytest.raises(PreconditionError):
        BasicNode(1, (0,), (0,), 0)
    with pytest.raises(PreconditionError):
        BasicNode(1, (0,), (1,), -1)


def test_validate_basic_reports_extension_and_bounds(basic_b4):
    assert validate_basic(basic_b4).ok
    report = validate_basic(basic_b4, color_bound=0, branching_bound=1)
    assert set(report.kinds()) == {"colors", "branching"}
    basic_b4.discard_node(BasicNode(3, (0, 0, 0), (1, 1, 1), 0))
    basic_b4.discard_node(BasicNode(3, (0, 0, 1), (1, 1, 0), 0))
    basic_b4.discard_node(BasicNode(3, (0, 0, 0), (1, 1, 0), 0))
    basic_b4.discard_node(BasicNode(3, (0, 0, 1), (1, 1, 1), 0))
    report = validate_basic(basic_b4)
    assert report.kinds() == ["extension"]


def test_closed_sets_round_trip():
    c0 = [((0, 0, 0), (1, 1, 1)), ((0, 1, 0), (1, 0, 1))]
    c1 = [((0, 0, 1), (0, 1, 1))]
    tree = basic_from_closed([c0, c1], 4)
    assert validate_basic(tree).ok
    assert induced_pairs(tree, 0) == {frozenset(p) for p in c0}
    assert induced_pairs(tree, 1) == {frozenset(p) for p in c1}
    assert tree.has_node(1, (0,), (1,), 0)
    assert not tree.has_node(1, (0,), (0,), 1)
    assert tree.has_node(2, (0, 0), (0, 1), 1)


def test_closed_sets_must_be_restriction_closed():
    with pytest.raises(PreconditionError):
        basic_from_closed([[((0,), (1,))]], 4)


def test_derived_ranked_trees_validate(basic_b4, basic_l4):
    for tree in (basic_b4, basic_l4):
        R = derive_ranked(tree)
        assert validate_ranked(R).ok
        assert check_rank_bound(R).ok
    assert derive_ranked(basic_b4).gamma == OrdinalCNF.of(3)
    assert derive_ranked(basic_l4).gamma == OrdinalCNF.of(1)


def test_derived_critical_elements_follow_the_zero_branch(basic_l4):
    R = derive_ranked(basic_l4)
    for a, c in R.c.items():
        assert c == zeros(a.level)


def test_ranked_validation_catches_damage(basic_l4):
    R = derive_ranked(basic_l4)
    top = next(a for a in R.r if a.level == 3)
    R.r[top] = OrdinalCNF.of(1)
    R.gamma = OrdinalCNF.of(2)
    report = validate_ranked(R)
    assert "rank-increase" in report.kinds()


def test_ranked_validation_catches_critical_drift(basic_l4):
    R = derive_ranked(basic_l4)
    top = next(a for a in R.r if a.level == 3)
    R.c[top] = (1, 1, 1)
    assert "critical-extension" in validate_ranked(R).kinds()


def test_rank_bound_reports_low_annotations(basic_b4):
    R = derive_ranked(basic_b4)
    bottom = next(a for a in R.r if a.level == 1)
    R.r[bottom] = OrdinalCNF.of(1)
    assert check_rank_bound(R).kinds() == ["bound"]


def test_truncation_and_restriction(basic_b4):
    R = derive_ranked(basic_b4)
    lower = R.restrict(3)
    assert lower.height == 3
    assert all(a.level < 3 for a in lower.r)
    assert basic_b4.truncate(2).node_count() == 1
    empty = BasicColoringTree(3, 1)
    assert rank_all(empty).tree_rank == 0


@pytest.mark.slow
def test_truncation_ranks_grow_with_height():
    rng = random.Random(2)
    for _ in range(25):
        tree = random_coloring_tree(rng, height=5, branching=2, sets=4)
        lower = rank_all(tree.truncate(4), 4).assignment
        upper = rank_all(tree, 4).assignment
        for a, value in lower.items():
            assert a in upper
            assert value <= upper[a]


@pytest.mark.slow
def test_derived_ranks_bound_truncation_ranks():
    rng = random.Random(3)
    for _ in range(100):
        R = derive_ranked(random_basic_tree(rng, 4, branching=3, pairs=6))
        report = check_rank_bound(R)
        assert report.ok, report.summary()


@pytest.mark.property_based
@given(st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_splitting_chains_bound_ranks_from_below(seed):
    tree = random_coloring_tree(random.Random(seed), height=4, branching=2, sets=5)
    engine = RankEngine(tree, cap=8)
    for a in engine.all():
        for depth in range(1, tree.height - a.level):
            if extract_splitting_chain(tree, a, depth).success:
                assert engine.rank(a) >= depth
