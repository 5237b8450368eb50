"""
Tests for forcing conditions, density, amalgamation and generic homogeneous families
"""

import itertools

import pytest

from colorank.core.errors import NotFoundError, PreconditionError
from colorank.core.generators import empty_model
from colorank.core.ordinal import OrdinalCNF
from colorank.forcing.condition import ForcingCondition, cond_leq, pair, validate_condition
from colorank.forcing.homogeneous import generic_homogeneous, verify_domination
from colorank.forcing.poset import (
    adjoin_template,
    amalgamate,
    amalgamation_templates,
    check_amalgamation,
    check_gamma,
    delta_system,
    extend_into_dense,
    forcing_height,
    forcing_templates,
    forcing_universal,
    relabel_condition,
)
from colorank.model.rank import oracle_from_model
from colorank.trees.ranked import validate_ranked
from colorank.universal.builder import UniversalTree
from colorank.universal.template import template_roots


@pytest.fixture
def universal(oracle, small_budgets):
    return forcing_universal(oracle, 5, small_budgets, amalgamation_size=2)


@pytest.fixture(scope="module")
def oracle6():
    return oracle_from_model(empty_model(6), 2)


@pytest.fixture(scope="module")
def universal6(oracle6):
    return forcing_universal(oracle6, 8, amalgamation_size=2)


def test_condition_order_and_relabeling():
    p = ForcingCondition(1, {0: (0,), 1: (1,)}, {pair(0, 1): 0})
    q = ForcingCondition(2, {0: (0, 0), 1: (1, 0), 2: (1, 1)},
                         {pair(0, 1): 0, pair(0, 2): 1, pair(1, 2): 1})
    assert cond_leq(p, p)
    assert cond_leq(p, q)
    assert not cond_leq(q, p)
    recolored = ForcingCondition(2, dict(q.eta), {**q.g, pair(0, 1): 2})
    assert not cond_leq(p, recolored)
    moved = relabel_condition(p, {0: 2, 1: 3})
    assert moved.w == [2, 3]
    assert moved.color(3, 2) == 0


def test_gamma_must_exceed_oracle_ranks(oracle, small_templates, small_budgets):
    with pytest.raises(PreconditionError):
        check_gamma(oracle, UniversalTree(OrdinalCNF.of(2), small_templates, small_budgets))


def test_adjoining_templates_are_ranked_trees(oracle):
    templates = forcing_templates(oracle, OrdinalCNF.of(3))
    assert [len(template_roots(S)) for S in templates] == [1, 2, 3]
    for S in templates:
        assert validate_ranked(S, strict_extension=True).ok
    S, newcomer = adjoin_template([0, 1], {pair(0, 1): 5}, 2, oracle, OrdinalCNF.of(3))
    assert newcomer in {(0, 1), (1, 1)}
    assert {node.k for node in S.base.all_nodes()} == {5, 6}


def test_amalgamation_templates_are_ranked_trees(oracle):
    templates = amalgamation_templates(oracle, 2, OrdinalCNF.of(3))
    assert templates
    for S in templates:
        assert validate_ranked(S, strict_extension=True).ok


def test_forcing_height_covers_the_adjoining_templates(oracle):
    assert forcing_height(oracle, 3) == 5
    assert forcing_height(oracle, 7) == 8


def test_first_element_sits_on_the_spine(oracle, universal):
    p = extend_into_dense(ForcingCondition(), 0, 2, oracle, universal)
    assert p.n == 2
    assert p.eta == {0: (0, 0)}
    assert validate_condition(p, oracle, universal.tree).ok
    with pytest.raises(PreconditionError):
        extend_into_dense(p, 4, 2, oracle, universal)


def test_zero_steps_stop_at_the_top(oracle, universal):
    with pytest.raises(NotFoundError):
        extend_into_dense(ForcingCondition(), 0, universal.height, oracle, universal)


@pytest.mark.slow
def test_adjoining_an_element_extends_the_condition(oracle, universal):
    height, nodes = universal.height, universal.node_count()
    p = extend_into_dense(ForcingCondition(), 0, 1, oracle, universal)
    q = extend_into_dense(p, 1, 0, oracle, universal)
    assert q.w == [0, 1]
    assert q.n > p.n
    assert cond_leq(p, q)
    assert validate_condition(q, oracle, universal.tree).ok
    assert (universal.height, universal.node_count()) == (height, nodes)


@pytest.mark.slow
def test_amalgamating_a_delta_system(oracle, universal):
    p = extend_into_dense(ForcingCondition(), 0, 1, oracle, universal)
    systems = list(delta_system(p, [], oracle))
    assert [sorted(f.values()) for _, f in systems] == [[0], [1], [2], [3]]
    q, f = systems[1]
    t = amalgamate(p, q, f, oracle, universal)
    assert t.w == [0, 1]
    assert cond_leq(p, t)
    assert cond_leq(q, t)
    assert validate_condition(t, oracle, universal.tree).ok


def test_amalgamation_preconditions(oracle, universal):
    p = extend_into_dense(ForcingCondition(), 0, 1, oracle, universal)
    shifted = ForcingCondition(2, {1: (1, 0)}, {})
    kinds = check_amalgamation(p, shifted, {0: 1}, oracle).kinds()
    assert set(kinds) == {"level", "coherence"}
    assert check_amalgamation(p, relabel_condition(p, {0: 1}), {0: 2}, oracle).kinds() == ["bijection"]
    with pytest.raises(PreconditionError):
        amalgamate(p, shifted, {0: 1}, oracle, universal)


def test_validate_condition_reports_branch_and_color_problems(oracle, universal):
    T = universal.tree
    outside = ForcingCondition(1, {0: (0,), 7: (5,)}, {pair(0, 7): 0})
    assert "branches" in validate_condition(outside, oracle, T).kinds()
    node = T.base.nodes(2)[0]
    unused = max(T.base.colors()) + 1
    uncolored = ForcingCondition(2, {0: node.x, 1: node.y}, {pair(0, 1): unused})
    assert validate_condition(uncolored, oracle, T).kinds() == ["colors"]


def test_short_universal_tree_stops_the_family(oracle, small_budgets):
    U = forcing_universal(oracle, 3, small_budgets)
    with pytest.raises(NotFoundError):
        generic_homogeneous(oracle, U, depth=3)


def _check_family(result, oracle, U, size):
    assert sorted(result.eta) == list(range(size))
    assert len(set(result.eta.values())) == size
    assert set(result.colors) == {pair(a, b) for a, b in itertools.combinations(range(size), 2)}
    T = U.tree
    report = result.certificate(T)
    assert report.ok, report.summary()
    for p in result.chain:
        assert validate_condition(p, oracle, T).ok
    for lower, upper in zip(result.chain, result.chain[1:]):
        assert cond_leq(lower, upper)
    report = verify_domination(T, result, oracle, cap=4)
    assert report.ok, report.summary()


@pytest.mark.slow
def test_generic_family_is_homogeneous(oracle, universal):
    height, nodes = universal.height, universal.node_count()
    result = generic_homogeneous(oracle, universal, depth=3)
    assert result.height >= 3
    _check_family(result, oracle, universal, 4)
    assert (universal.height, universal.node_count()) == (height, nodes)


@pytest.mark.slow
def test_generic_family_at_depth_five_on_four_elements(oracle):
    U = forcing_universal(oracle, 8)
    result = generic_homogeneous(oracle, U, depth=5)
    assert result.height >= 5
    _check_family(result, oracle, U, 4)


@pytest.mark.slow
def test_generic_family_at_depth_five_on_six_elements(oracle6, universal6):
    result = generic_homogeneous(oracle6, universal6, depth=5)
    assert result.height >= 5
    _check_family(result, oracle6, universal6, 6)


def _delta_pairs(oracle, U):
    """Isomorphic pairs with a common root, from conditions holding 0 and then 1 at rising levels"""
    for n in range(6):
        first = extend_into_dense(ForcingCondition(), 0, n, oracle, U)
        for p in (first, extend_into_dense(first, 1, 0, oracle, U)):
            for size in range(len(p.w)):
                for root in itertools.combinations(p.w, size):
                    for q, f in delta_system(p, root, oracle):
                        if q is not p:
                            yield p, q, f


@pytest.mark.slow
def test_amalgamation_of_fifty_delta_pairs(oracle6, universal6):
    pairs = list(itertools.islice(_delta_pairs(oracle6, universal6), 50))
    assert len(pairs) == 50
    T = universal6.tree
    for p, q, f in pairs:
        t = amalgamate(p, q, f, oracle6, universal6)
        report = validate_condition(t, oracle6, T)
        assert report.ok, report.summary()
        assert cond_leq(p, t)
        assert cond_leq(q, t)
