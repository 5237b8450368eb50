"""
Tests for templates, universal trees and embeddings into them
"""

import itertools

import pytest

from colorank.core.config import Budgets
from colorank.core.errors import BudgetExceeded, NotFoundError, PreconditionError
from colorank.core.generators import basic_full_binary, basic_two_branch
from colorank.core.ordinal import OrdinalCNF, least_above
from colorank.trees.basic import BasicColoringTree, BasicNode
from colorank.trees.rank import RankEngine
from colorank.trees.ranked import RankedTree, check_rank_bound, derive_ranked, validate_ranked
from colorank.universal.builder import UniversalTree, build_universal
from colorank.universal.embed import (
    augment_coloring,
    coloring_templates,
    embed_coloring,
    embed_ranked,
    required_height,
)
from colorank.universal.embedding import validate_embedding
from colorank.universal.template import (
    CHILD_LEVEL,
    ROOT_LEVEL,
    LevelBounds,
    binarize,
    canonical_form,
    enumerate_templates,
    in_class,
    level_bounds,
    level_templates,
    relabel_template,
    template_children,
    template_from_levels,
    template_roots,
)

ZERO = OrdinalCNF.of(0)
ONE = OrdinalCNF.of(1)


def _universal_for(S, budgets, templates=None, shortfall=0):
    """Universal tree copying the templates read off S, tall enough to embed it"""
    extra = level_templates(S, budgets.approx_cap, budgets.approx_budget)
    gamma = max(S.gamma, least_above([value for T in extra for value in T.r.values()]), ONE)
    height = required_height(extra, gamma, budgets.max_height) - shortfall
    return build_universal(gamma, height, templates, budgets, extra)


def _three_children():
    tree = BasicColoringTree(3, 1, [
        BasicNode(1, (0,), (1,), 0),
        BasicNode(2, (0, 0), (1, 0), 0),
        BasicNode(2, (0, 1), (1, 0), 0),
        BasicNode(2, (0, 2), (1, 0), 0),
    ])
    return derive_ranked(tree)


def test_level_bounds_grow_with_the_level():
    bounds = level_bounds(OrdinalCNF.of(3), 2, max_roots=2, max_colors=1, max_splits=1)
    assert bounds.node_bound == 2
    assert bounds.color_bound == 2
    assert bounds.max_splits == 1
    assert bounds.ranks == frozenset({ZERO, ONE, OrdinalCNF.of(2)})
    wide = level_bounds(OrdinalCNF.omega(), 9, max_roots=2, max_colors=1)
    assert (wide.node_bound, wide.color_bound, wide.max_splits) == (3, 2, None)


def test_enumerated_templates_are_valid_and_pairwise_distinct():
    templates = enumerate_templates(3, 2, [ZERO, ONE], cap=4, max_splits=1)
    assert templates
    keys = [canonical_form(t)[0] for t in templates]
    assert len(set(keys)) == len(keys)
    bounds = LevelBounds(3, 2, frozenset({ZERO, ONE}), max_splits=1)
    assert {len(template_roots(t)) for t in templates} == {1, 2}
    for template in templates:
        assert in_class(template, bounds, cap=4)
        assert validate_ranked(template, cap=4, strict_extension=True).ok


def test_canonical_form_ignores_root_order():
    for template in enumerate_templates(3, 2, [ZERO, ONE], cap=4, max_splits=1):
        if len(template_roots(template)) != 2:
            continue
        swapped = relabel_template(template, {0: 1, 1: 0}, {}, {0: 0})
        assert canonical_form(swapped)[0] == canonical_form(template)[0]


def test_single_root_templates_and_empty_families():
    (single,) = enumerate_templates(2, 2, [ZERO], cap=4)
    assert template_roots(single) == [(0,)]
    assert len(template_children(single)) == 2
    assert enumerate_templates(1, 2, [ZERO], cap=4) == []
    assert enumerate_templates(3, 2, [], cap=4) == []
    with pytest.raises(PreconditionError):
        enumerate_templates(0, 2, [ZERO])


@pytest.mark.slow
def test_cross_parent_pairs_may_carry_fresh_colors():
    def fresh_across(template):
        for node in template.base.nodes(CHILD_LEVEL):
            parents = (node.x[:ROOT_LEVEL], node.y[:ROOT_LEVEL])
            if parents[0] == parents[1]:
                continue
            below = {n.k for n in template.base.nodes(ROOT_LEVEL) if (n.x, n.y) == parents}
            if node.k not in below:
                return True
        return False

    assert any(fresh_across(t) for t in enumerate_templates(3, 3, [ZERO], cap=4))


def _mover(roots, swaps):
    def move(s):
        if len(s) == ROOT_LEVEL:
            return (roots[s[0]],)
        return (roots[s[0]], s[1] ^ swaps.get(s[0], 0))
    return move


def _least_signature(R):
    """Smallest encoding of a single-color template over root permutations and child swaps"""
    children = {s for node in R.base.nodes(CHILD_LEVEL) for s in (node.x, node.y)}
    roots = sorted({s[0] for s in children})
    doubles = sorted({s[0] for s in children if s[1] == 1})
    best = None
    for perm in itertools.permutations(range(len(roots))):
        for bits in itertools.product((0, 1), repeat=len(doubles)):
            move = _mover(dict(zip(roots, perm)), dict(zip(doubles, bits)))
            nodes = tuple(sorted((n.level, *sorted((move(n.x), move(n.y)))) for n in R.base.all_nodes()))
            table = tuple(sorted(
                (a.level, tuple(sorted(move(s) for s in a.v)), R.r[a].terms, move(R.c[a])) for a in R.r
            ))
            if best is None or (nodes, table) < best:
                best = (nodes, table)
    return best


def _brute_force_types(node_bound, ranks, max_splits, cap=4):
    """Single-color templates built from every labelled node set and (r, c) table, up to isomorphism"""
    gamma = least_above(ranks)
    found = set()
    for s in range(1, node_bound):
        for widths in itertools.product((1, 2), repeat=s):
            if sum(w == 2 for w in widths) > max_splits:
                continue
            children = [(i, e) for i in range(s) for e in range(widths[i])]
            root_pairs = list(itertools.combinations(range(s), 2))
            child_pairs = list(itertools.combinations(children, 2))
            for lower in itertools.product((False, True), repeat=len(root_pairs)):
                level0 = [p for p, on in zip(root_pairs, lower) if on]
                for upper in itertools.product((False, True), repeat=len(child_pairs)):
                    level1 = [p for p, on in zip(child_pairs, upper) if on]
                    if not level1 or {c for p in level1 for c in p} != set(children):
                        continue
                    crossing = {(a[0], b[0]) for a, b in level1}
                    if any(p not in crossing for p in level0):
                        continue
                    nodes = [BasicNode(ROOT_LEVEL, (i,), (j,), 0) for i, j in level0]
                    nodes += [BasicNode(CHILD_LEVEL, a, b, 0) for a, b in level1]
                    base = BasicColoringTree(CHILD_LEVEL + 1, ROOT_LEVEL, nodes)
                    engine = RankEngine(base, cap)
                    approxs = engine.all()
                    options = [[(r, c) for r in ranks for c in a.v] for a in approxs]
                    for choice in itertools.product(*options):
                        R = RankedTree(base=base, gamma=gamma,
                                       r={a: r for a, (r, _) in zip(approxs, choice)},
                                       c={a: c for a, (_, c) in zip(approxs, choice)})
                        if validate_ranked(R, cap, engine=engine, strict_extension=True).ok:
                            found.add(_least_signature(R))
    return found


@pytest.mark.slow
@pytest.mark.parametrize("node_bound, ranks", [
    (2, [ZERO, ONE]),
    (3, [ZERO]),
    (3, [ZERO, ONE]),
])
def test_template_count_matches_brute_force(node_bound, ranks):
    expected = _brute_force_types(node_bound, ranks, max_splits=1)
    assert len(enumerate_templates(node_bound, 2, ranks, cap=4, max_splits=1)) == len(expected)


def test_template_read_off_two_levels():
    S = derive_ranked(basic_full_binary(3))
    template, back = template_from_levels(S, 1)
    assert template_roots(template) == [(0,), (1,)]
    assert len(template_children(template)) == 4
    assert back[(0,)] == (0,)
    assert sorted(back[c] for c in template_children(template)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert all(a in template.r for a in template.c)


def test_binarize_splits_wide_levels():
    S = _three_children()
    assert validate_ranked(S).ok
    binary, sigma = binarize(S)
    assert binary.height == 4
    for n in range(binary.height - 1):
        for x in binary.support(n):
            assert len([s for s in binary.support(n + 1) if s[:n] == x]) <= 2
    assert validate_ranked(binary).ok
    images = [sigma[(0, e)] for e in range(3)]
    assert len(set(images)) == 3
    assert all(len(t) == 3 and t[0] == 0 for t in images)
    assert sigma[(1, 0)][0] == 1


def test_binarize_leaves_binary_trees_alone(basic_b4):
    S = derive_ranked(basic_b4)
    binary, sigma = binarize(S)
    assert binary is S
    assert all(s == t for s, t in sigma.items())


def test_universal_tree_requires_positive_gamma():
    with pytest.raises(PreconditionError):
        UniversalTree(ZERO)
    with pytest.raises(PreconditionError):
        build_universal(ONE, 0)


def test_extra_templates_must_fit_below_gamma():
    ranked_one = next(t for t in enumerate_templates(2, 2, [ZERO, ONE], cap=4) if ONE in t.r.values())
    with pytest.raises(PreconditionError):
        UniversalTree(ONE, extra=[ranked_one])
    U = UniversalTree(OrdinalCNF.of(2), extra=[ranked_one])
    assert len(U.extra) == 1


@pytest.mark.slow
def test_small_universal_tree_is_universal(small_templates, small_budgets):
    U = build_universal(ONE, 3, small_templates, small_budgets)
    assert U.height == 3
    assert U.node_count() > 0
    assert 2 in U.recorded
    report = U.check_universality(1)
    assert report.ok, report.summary()
    assert report.counts["templates"] > 0
    assert report.counts["checked"] > 0
    assert (0, 0) in U.tree.support(2)


@pytest.mark.slow
def test_default_universal_tree_is_universal_below_level_three():
    U = build_universal(OrdinalCNF.of(3), 5)
    checked = 0
    for level in (1, 2):
        report = U.check_universality(level)
        assert report.ok, report.summary()
        assert report.counts["checked"] > 0
        checked += report.counts["checked"]
    assert checked > 0


@pytest.mark.slow
@pytest.mark.parametrize("gamma", [ONE, OrdinalCNF.of(2), OrdinalCNF.of(3), OrdinalCNF.omega()])
@pytest.mark.parametrize("height", [3, 4])
def test_universal_tree_ranks_bound_truncation_ranks(gamma, height):
    U = build_universal(gamma, height)
    report = check_rank_bound(U.tree, U.cap, U.budgets.approx_budget)
    assert report.ok, report.summary()


def test_universal_tree_height_guard(small_templates):
    with pytest.raises(BudgetExceeded):
        build_universal(ONE, 3, small_templates, Budgets(max_height=2))


@pytest.mark.slow
def test_embed_two_branch_tree(small_templates, small_budgets):
    S = derive_ranked(basic_two_branch(3))
    U = _universal_for(S, small_budgets, small_templates)
    height, nodes = U.height, U.node_count()
    e = embed_ranked(S, U)
    assert (U.height, U.node_count()) == (height, nodes)
    assert validate_embedding(e, S, U.tree, U.cap).ok
    for node in S.base.all_nodes():
        fx, fy = e.f[node.x], e.f[node.y]
        assert U.tree.base.has_node(len(fx), *sorted((fx, fy)), e.f_star[node.k])


@pytest.mark.slow
def test_embed_binarizes_wide_support(small_templates, small_budgets):
    S = _three_children()
    U = _universal_for(S, small_budgets, small_templates)
    height, nodes = U.height, U.node_count()
    e = embed_ranked(S, U)
    assert (U.height, U.node_count()) == (height, nodes)
    assert validate_embedding(e, S, U.tree, U.cap).ok
    images = {e.f[(0, i)] for i in range(3)}
    assert len(images) == 3
    assert len({len(t) for t in images}) == 1


@pytest.mark.slow
def test_embed_rejects_templates_the_tree_does_not_copy(small_templates, small_budgets):
    S = derive_ranked(basic_two_branch(3))
    U = build_universal(ONE, 4, small_templates, small_budgets)
    with pytest.raises(PreconditionError):
        embed_ranked(S, U)


@pytest.mark.slow
def test_embed_fails_on_a_short_tree(small_templates, small_budgets):
    S = derive_ranked(basic_two_branch(3))
    U = _universal_for(S, small_budgets, small_templates, shortfall=1)
    with pytest.raises(NotFoundError):
        embed_ranked(S, U)


def test_embed_rejects_ranks_at_or_above_gamma(small_templates, small_budgets):
    S = derive_ranked(basic_full_binary(4))
    with pytest.raises(PreconditionError):
        embed_ranked(S, build_universal(ONE, 2, small_templates, small_budgets))


def test_embed_requires_full_support(small_templates, small_budgets):
    tree = BasicColoringTree(3, 1, [
        BasicNode(1, (0,), (1,), 0),
        BasicNode(2, (0, 0), (1, 0), 0),
        BasicNode(2, (2, 0), (2, 1), 0),
    ])
    S = derive_ranked(tree)
    with pytest.raises(PreconditionError):
        embed_ranked(S, build_universal(OrdinalCNF.omega(), 2, small_templates, small_budgets))


def test_augmentation_adds_a_fresh_base_branch():
    S = basic_two_branch(3)
    augmented = augment_coloring(S)
    assert augmented.colors() == {0, 1}
    assert augmented.has_node(2, (0, 0), (1, 1), 1)
    assert augmented.has_node(1, (0,), (1,), 1)
    assert S.node_count() == 2


@pytest.mark.slow
def test_embed_coloring_preserves_rank(small_templates, small_budgets):
    S = basic_two_branch(3)
    extra = coloring_templates(S, small_budgets.approx_cap, small_budgets.approx_budget)
    gamma = max(ONE, least_above([value for T in extra for value in T.r.values()]))
    height = required_height(extra, gamma, small_budgets.max_height)
    U = build_universal(gamma, height, small_templates, small_budgets, extra)
    result = embed_coloring(S, U)
    assert result.rank_preserved
    assert set(result.phi) == {(0, 0), (1, 1)}
    assert result.phi[(0, 0)] != result.phi[(1, 1)]


def test_embed_empty_coloring_maps_to_the_spine(small_templates, small_budgets):
    S = BasicColoringTree(3, 1)
    assert coloring_templates(S, small_budgets.approx_cap, small_budgets.approx_budget) == []
    result = embed_coloring(S, build_universal(ONE, 2, small_templates, small_budgets))
    assert result.rank == 0
    assert result.phi == {(0, 0): (0,)}


def _signature(template):
    nodes = {str(node) for node in template.base.all_nodes()}
    annotations = {(a.key(), template.r[a], template.c[a]) for a in template.r}
    return nodes, annotations


def _isomorphic(S, T):
    """Brute force over root permutations and child swaps (single-color templates)"""
    roots = [s[0] for s in template_roots(S)]
    if len(roots) != len(template_roots(T)):
        return False
    target = _signature(T)
    for perm in itertools.permutations(range(len(roots))):
        for bits in itertools.product((0, 1), repeat=len(roots)):
            moved = relabel_template(S, dict(zip(roots, perm)), dict(zip(roots, bits)), {0: 0})
            if _signature(moved) == target:
                return True
    return False


@pytest.mark.slow
def test_enumerated_templates_are_pairwise_non_isomorphic():
    templates = enumerate_templates(3, 2, [ZERO, ONE], cap=4, max_splits=1)
    for template in templates:
        assert _isomorphic(template, template)
    for S, T in itertools.combinations(templates, 2):
        assert not _isomorphic(S, T)
