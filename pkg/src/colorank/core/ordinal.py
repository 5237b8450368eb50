"""
Colorank Ordinals - Ordinals below w^w in Cantor normal form
"""

import itertools
import re
from dataclasses import dataclass
from enum import Enum
from functools import total_ordering
from typing import Iterable, List, Set, Tuple, Union

from .errors import ParseError, PreconditionError

Term = Tuple[int, int]

_TERM_RE = re.compile(r"^(?:w\^(\d+)\*(\d+)|w\*(\d+)|(\d+))$")


class Comparison(str, Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"


@total_ordering
@dataclass(frozen=True)
class OrdinalCNF:
    """Ordinal w^e1*c1 + ... + w^ek*ck with e1 > ... > ek and every ci >= 1.

    The empty term list is 0. Ordering is lexicographic on the term tuple,
    which coincides with ordinal order for canonical forms.
    """

    terms: Tuple[Term, ...] = ()

    def __post_init__(self):
        previous = None
        for exponent, coefficient in self.terms:
            if exponent < 0 or coefficient < 1:
                raise PreconditionError(f"non-canonical term w^{exponent}*{coefficient}")
            if previous is not None and exponent >= previous:
                raise PreconditionError("exponents must be strictly decreasing")
            previous = exponent

    @classmethod
    def of(cls, value: Union[int, "OrdinalCNF"]) -> "OrdinalCNF":
        if isinstance(value, OrdinalCNF):
            return value
        if value < 0:
            raise PreconditionError(f"negative ordinal {value}")
        return cls(((0, value),)) if value else cls()

    @classmethod
    def omega(cls, coefficient: int = 1, exponent: int = 1) -> "OrdinalCNF":
        return cls(((exponent, coefficient),))

    def _key(self) -> Tuple[Term, ...]:
        return self.terms

    def __eq__(self, other):
        if isinstance(other, int):
            other = OrdinalCNF.of(other) if other >= 0 else None
        if not isinstance(other, OrdinalCNF):
            return NotImplemented
        return self.terms == other.terms

    def __lt__(self, other):
        if isinstance(other, int):
            if other < 0:
                return False
            other = OrdinalCNF.of(other)
        if not isinstance(other, OrdinalCNF):
            return NotImplemented
        return self.terms < other.terms

    def __hash__(self):
        return hash(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exponent, coefficient in self.terms:
            if exponent == 0:
                parts.append(str(coefficient))
            elif exponent == 1:
                parts.append(f"w*{coefficient}")
            else:
                parts.append(f"w^{exponent}*{coefficient}")
        return "+".join(parts)

    def __repr__(self) -> str:
        return f"OrdinalCNF({self})"

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0] == 0)

    def as_int(self) -> int:
        if not self.is_finite:
            raise PreconditionError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    def successor(self) -> "OrdinalCNF":
        if self.terms and self.terms[-1][0] == 0:
            exponent, coefficient = self.terms[-1]
            return OrdinalCNF(self.terms[:-1] + ((0, coefficient + 1),))
        return OrdinalCNF(self.terms + ((0, 1),))

    def within(self, n: int) -> bool:
        """Every exponent and coefficient is at most n"""
        return all(e <= n and c <= n for e, c in self.terms)


def ord_parse(text: str) -> OrdinalCNF:
    """Parse `term ("+" term)*` with term one of `w^E*C`, `w*C`, `C`"""
    text = text.strip()
    if not text:
        raise ParseError("empty ordinal literal")
    if text == "0":
        return OrdinalCNF()
    terms: List[Term] = []
    for raw in text.split("+"):
        raw = raw.strip()
        match = _TERM_RE.match(raw)
        if not match:
            raise ParseError(f"bad ordinal term '{raw}'")
        if match.group(1) is not None:
            term = (int(match.group(1)), int(match.group(2)))
            if term[0] < 2:
                raise ParseError(f"non-canonical term '{raw}'; write exponents 0 and 1 as C and w*C")
        elif match.group(3) is not None:
            term = (1, int(match.group(3)))
        else:
            term = (0, int(match.group(4)))
        if term[1] == 0:
            raise ParseError(f"zero coefficient in term '{raw}'")
        if terms and term[0] >= terms[-1][0]:
            raise ParseError(f"term '{raw}' does not decrease the exponent")
        terms.append(term)
    return OrdinalCNF(tuple(terms))


def ord_cmp(a: OrdinalCNF, b: OrdinalCNF) -> Comparison:
    if a == b:
        return Comparison.EQUAL
    return Comparison.LESS if a < b else Comparison.GREATER


def ord_max(values: Iterable[OrdinalCNF], default: OrdinalCNF = OrdinalCNF()) -> OrdinalCNF:
    result = None
    for value in values:
        if result is None or value > result:
            result = value
    return default if result is None else result


def least_above(values: Iterable[OrdinalCNF]) -> OrdinalCNF:
    """Least ordinal exceeding every value (1 for an empty collection)"""
    values = list(values)
    if not values:
        return OrdinalCNF.of(1)
    return ord_max(values).successor()


def gamma_filtration(gamma: OrdinalCNF, n: int) -> Set[OrdinalCNF]:
    """Finite piece of [0, gamma) with all exponents and coefficients <= n.

    The pieces increase with n and exhaust [0, gamma).
    """
    if gamma.is_zero:
        raise PreconditionError("gamma must be positive")
    result: Set[OrdinalCNF] = set()
    if n < 0:
        return result
    exponents = list(range(n, -1, -1))
    for size in range(0, n + 2):
        for chosen in itertools.combinations(exponents, size):
            for coefficients in itertools.product(range(1, n + 1), repeat=size):
                candidate = OrdinalCNF(tuple(zip(chosen, coefficients)))
                if candidate < gamma:
                    result.add(candidate)
    return result


def sorted_ordinals(values: Iterable[OrdinalCNF]) -> List[OrdinalCNF]:
    return sorted(set(values))
