"""
Tests for ordinals in Cantor normal form
"""

import pytest
from conftest import ordinals
from hypothesis import given, settings

from colorank.core.errors import ParseError, PreconditionError
from colorank.core.ordinal import (
    Comparison,
    OrdinalCNF,
    gamma_filtration,
    least_above,
    ord_cmp,
    ord_parse,
)


def test_parse_known_literals():
    assert ord_parse("0") == OrdinalCNF()
    assert ord_parse("7") == OrdinalCNF.of(7)
    assert ord_parse("w*1") == OrdinalCNF.omega()
    assert ord_parse("w*3+2") == OrdinalCNF(((1, 3), (0, 2)))
    assert ord_parse("w^2*2+w*1+5") == OrdinalCNF(((2, 2), (1, 1), (0, 5)))


@pytest.mark.parametrize("literal", [
    "", "w", "w^1*0", "3+w", "w+w", "x", "w^-1*2", "1+2", "w^1*3", "w^0*5", "w^2*1+w^1*2",
])
def test_parse_rejects_non_canonical(literal):
    with pytest.raises(ParseError):
        ord_parse(literal)


def test_order_on_known_values():
    assert OrdinalCNF.of(5) < OrdinalCNF.omega()
    assert OrdinalCNF.omega() < ord_parse("w*1+1")
    assert ord_parse("w*1+5") < ord_parse("w*2")
    assert ord_parse("w*9+9") < ord_parse("w^2*1")
    assert ord_cmp(ord_parse("w*2"), ord_parse("w*2")) == Comparison.EQUAL
    assert ord_cmp(OrdinalCNF.of(3), OrdinalCNF.of(1)) == Comparison.GREATER


def test_successor_and_least_above():
    assert OrdinalCNF.omega().successor() == ord_parse("w*1+1")
    assert ord_parse("w*1+1").successor() == ord_parse("w*1+2")
    assert least_above([]) == OrdinalCNF.of(1)
    assert least_above([OrdinalCNF.of(2), OrdinalCNF.omega()]) == ord_parse("w*1+1")


def test_non_canonical_construction_fails():
    with pytest.raises(PreconditionError):
        OrdinalCNF(((0, 1), (1, 1)))
    with pytest.raises(PreconditionError):
        OrdinalCNF.of(-1)


def test_gamma_filtration_small_cases():
    assert gamma_filtration(OrdinalCNF.omega(), 1) == {OrdinalCNF(), OrdinalCNF.of(1)}
    assert gamma_filtration(OrdinalCNF.of(3), 5) == {OrdinalCNF.of(i) for i in range(3)}
    with pytest.raises(PreconditionError):
        gamma_filtration(OrdinalCNF(), 2)


@pytest.mark.property_based
@given(ordinals())
@settings(max_examples=200)
def test_print_parse_is_identity(alpha):
    assert ord_parse(str(alpha)) == alpha


@pytest.mark.property_based
@given(ordinals(), ordinals())
@settings(max_examples=200)
def test_comparison_is_total_and_antisymmetric(alpha, beta):
    outcomes = [alpha < beta, alpha == beta, beta < alpha]
    assert outcomes.count(True) == 1


@pytest.mark.property_based
@given(ordinals())
@settings(max_examples=100)
def test_successor_is_the_least_larger_ordinal(alpha):
    beta = alpha.successor()
    assert alpha < beta
    assert all(not (alpha < x < beta) for x in gamma_filtration(beta.successor(), 4))


@pytest.mark.property_based
@given(ordinals(max_exponent=2, max_coefficient=3))
@settings(max_examples=50, deadline=None)
def test_filtration_increases_and_stays_below_gamma(gamma):
    if gamma.is_zero:
        return
    previous = set()
    for n in range(4):
        piece = gamma_filtration(gamma, n)
        assert previous <= piece
        assert all(x < gamma for x in piece)
        previous = piece
