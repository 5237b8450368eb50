"""
Colorank Finite Models - Relational structures, atomic types and theta-independence
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from ..core.errors import PreconditionError

logger = logging.getLogger(__name__)

SUBJECT = "y"
EQUALITY = "="

# (symbol, argument variables, truth value); variables are "y" and "b0", "b1", ...
Atom = Tuple[str, Tuple[str, ...], bool]


@dataclass
class FiniteModel:
    """Universe {0..size-1} with named relations"""

    size: int
    vocabulary: Dict[str, int] = field(default_factory=dict)
    relations: Dict[str, FrozenSet[Tuple[int, ...]]] = field(default_factory=dict)

    def __post_init__(self):
        if self.size < 0:
            raise PreconditionError("universe size must be non-negative")
        self.vocabulary = dict(self.vocabulary)
        relations = {}
        for name, arity in self.vocabulary.items():
            if name == EQUALITY or not name:
                raise PreconditionError(f"invalid relation symbol {name!r}")
            if arity < 1:
                raise PreconditionError(f"relation {name} needs positive arity")
            tuples = frozenset(tuple(t) for t in self.relations.get(name, ()))
            for t in tuples:
                if len(t) != arity:
                    raise PreconditionError(f"tuple {t} does not match arity {arity} of {name}")
                if any(not 0 <= e < self.size for e in t):
                    raise PreconditionError(f"tuple {t} of {name} leaves the universe")
            relations[name] = tuples
        unknown = set(self.relations) - set(self.vocabulary)
        if unknown:
            raise PreconditionError(f"relations {sorted(unknown)} are not in the vocabulary")
        self.relations = relations

    @property
    def universe(self) -> range:
        return range(self.size)

    def holds(self, name: str, args: Sequence[int]) -> bool:
        if name == EQUALITY:
            return args[0] == args[1]
        return tuple(args) in self.relations[name]

    def relabel(self, perm: Sequence[int]) -> "FiniteModel":
        """Image of the model under the bijection i -> perm[i]"""
        return FiniteModel(
            self.size,
            self.vocabulary,
            {name: {tuple(perm[e] for e in t) for t in tuples} for name, tuples in self.relations.items()},
        )


def _variables(params: int) -> List[str]:
    return [SUBJECT] + [f"b{i}" for i in range(params)]


def _assign(variables: Tuple[str, ...], y: int, params: Sequence[int]) -> List[int]:
    return [y if v == SUBJECT else params[int(v[1:])] for v in variables]


@dataclass(frozen=True)
class AtomicType:
    """Complete quantifier-free type of the subject y over ordered parameters"""

    params: Tuple[int, ...]
    atoms: Tuple[Atom, ...]

    def satisfied_by(self, model: FiniteModel, y: int) -> bool:
        return all(model.holds(name, _assign(args, y, self.params)) == value for name, args, value in self.atoms)

    def is_relational(self) -> bool:
        return any(name != EQUALITY for name, _, _ in self.atoms)

    def realizers(self, model: Optional[FiniteModel] = None, size: Optional[int] = None) -> Optional[List[int]]:
        """Elements satisfying every atom.

        Equality-only types need just the universe size; relational types
        need the model and yield None without it.
        """
        if model is not None:
            return [y for y in model.universe if self.satisfied_by(model, y)]
        if size is None or self.is_relational():
            return None
        return [
            y for y in range(size)
            if all((y == self.params[int(args[1][1:])]) == value for _, args, value in self.atoms)
        ]

    def encode(self) -> str:
        params = ",".join(str(b) for b in self.params)
        atoms = ";".join(f"{name}({','.join(args)})={int(value)}" for name, args, value in self.atoms)
        return f"{params}|{atoms}"

    def __str__(self) -> str:
        return self.encode()


def atomic_type(model: FiniteModel, a: int, params: Sequence[int]) -> AtomicType:
    """Complete atomic type of a over the parameter list.

    Only atoms mentioning y are recorded; the others do not depend on y.
    """
    params = tuple(params)
    if a in params:
        raise PreconditionError(f"element {a} occurs among the parameters")
    variables = _variables(len(params))
    atoms: List[Atom] = []
    for i in range(len(params)):
        atoms.append((EQUALITY, (SUBJECT, f"b{i}"), a == params[i]))
    for name, arity in model.vocabulary.items():
        for args in itertools.product(variables, repeat=arity):
            if SUBJECT not in args:
                continue
            atoms.append((name, args, model.holds(name, _assign(args, a, params))))
    return AtomicType(params=params, atoms=tuple(atoms))


def type_over(model: FiniteModel, a: int, w: Iterable[int]) -> AtomicType:
    """Atomic type of a over the rest of w, parameters in increasing order"""
    return atomic_type(model, a, sorted(set(w) - {a}))


def independent_theta(model: FiniteModel, theta: int, w: Iterable[int]) -> bool:
    """True iff every a in w has at least theta realizers of its type over w - {a}"""
    w = set(w)
    if any(not 0 <= a < model.size for a in w):
        raise PreconditionError("set leaves the universe")
    if theta < 2:
        raise PreconditionError("theta must be at least 2")
    return all(len(type_over(model, a, w).realizers(model)) >= theta for a in w)
