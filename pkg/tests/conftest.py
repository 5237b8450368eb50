"""
Shared fixtures for the colorank test suite
"""

import pytest
from hypothesis import strategies as st

from colorank.core.config import Budgets, TemplateBounds
from colorank.core.generators import (
    basic_full_binary,
    basic_two_branch,
    empty_model,
    full_binary_tree,
    two_branch_tree,
)
from colorank.core.ordinal import OrdinalCNF
from colorank.model.rank import oracle_from_model


@st.composite
def ordinals(draw, max_exponent: int = 3, max_coefficient: int = 4):
    """Ordinals below w^(max_exponent+1) in canonical form"""
    exponents = draw(st.lists(st.integers(0, max_exponent), unique=True, max_size=max_exponent + 1))
    terms = tuple((e, draw(st.integers(1, max_coefficient))) for e in sorted(exponents, reverse=True))
    return OrdinalCNF(terms)


@pytest.fixture
def b4():
    return full_binary_tree(4)


@pytest.fixture
def l4():
    return two_branch_tree(4)


@pytest.fixture
def basic_b4():
    return basic_full_binary(4)


@pytest.fixture
def basic_l4():
    return basic_two_branch(4)


@pytest.fixture
def small_templates():
    return TemplateBounds(max_roots=2, max_colors=1, max_level=2)


@pytest.fixture
def small_budgets():
    return Budgets(approx_cap=4, approx_budget=200_000, node_budget=200_000, max_height=12)


@pytest.fixture
def empty4():
    return empty_model(4)


@pytest.fixture
def oracle(empty4):
    return oracle_from_model(empty4, 2)
