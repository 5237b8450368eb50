"""
Colorank Model Rank - Theta-rank of independent sets, critical data and rank oracles
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from ..core.errors import ConsistencyError, PreconditionError
from ..core.ordinal import OrdinalCNF
from ..core.report import ValidationReport
from .finite_model import AtomicType, FiniteModel, independent_theta, type_over

logger = logging.getLogger(__name__)

Subset = FrozenSet[int]


class ThetaRank:
    """Memoized theta-rank on nonempty theta-independent subsets of one model.

    rank(w) >= k+1 iff every a in w has a witness a' != a realizing the type
    of a over w - {a} with w + {a'} independent of rank >= k.
    """

    def __init__(self, model: FiniteModel, theta: int):
        if theta < 2:
            raise PreconditionError("theta must be at least 2")
        self.model = model
        self.theta = theta
        self._independent: Dict[Subset, bool] = {}
        self._rank: Dict[Subset, int] = {}
        self.logger = logging.getLogger(__name__)

    def independent(self, w: Iterable[int]) -> bool:
        key = frozenset(w)
        if key not in self._independent:
            self._independent[key] = independent_theta(self.model, self.theta, key)
        return self._independent[key]

    def witnesses(self, w: Subset, a: int) -> List[int]:
        """Elements a' != a realizing the type of a over w - {a} that keep w + {a'} independent"""
        found = []
        for x in type_over(self.model, a, w).realizers(self.model):
            if x != a and self.independent(w | {x}):
                found.append(x)
        return found

    def _branch(self, w: Subset, a: int) -> int:
        """1 + the best rank reachable through a witness for a, 0 without witnesses"""
        return max((self.rank(w | {x}) + 1 for x in self.witnesses(w, a)), default=0)

    def rank(self, w: Iterable[int]) -> int:
        key = frozenset(w)
        if key in self._rank:
            return self._rank[key]
        if not key:
            raise PreconditionError("the empty set carries no rank")
        if not self.independent(key):
            raise PreconditionError(f"{sorted(key)} is not {self.theta}-independent")
        value = min(self._branch(key, a) for a in sorted(key))
        self._rank[key] = value
        return value

    def critical(self, w: Iterable[int]) -> Tuple[int, AtomicType]:
        key = frozenset(w)
        value = self.rank(key)
        for a in sorted(key):
            if self._branch(key, a) <= value:
                return a, type_over(self.model, a, key)
        raise ConsistencyError(f"no critical element for {sorted(key)} at rank {value}")

    def domain(self) -> List[Subset]:
        """All nonempty independent subsets, by size then lexicographically"""
        found = []
        for size in range(1, self.model.size + 1):
            for w in itertools.combinations(self.model.universe, size):
                if self.independent(w):
                    found.append(frozenset(w))
        return found

    def model_rank(self) -> int:
        domain = self.domain()
        value = max((self.rank(w) + 1 for w in domain), default=0)
        self.logger.info(f"theta={self.theta} model rank {value} over {len(domain)} independent sets")
        return value


def rank_theta(model: FiniteModel, theta: int, w: Iterable[int]) -> int:
    return ThetaRank(model, theta).rank(w)


def rank_theta_model(model: FiniteModel, theta: int) -> int:
    return ThetaRank(model, theta).model_rank()


def critical(model: FiniteModel, theta: int, w: Iterable[int]) -> Tuple[int, AtomicType]:
    """Least element of w whose type admits no witness keeping the rank"""
    return ThetaRank(model, theta).critical(w)


@dataclass
class RankedModelOracle:
    """Rank, critical element and critical type on a family of finite subsets"""

    size: int
    rank: Dict[Subset, OrdinalCNF] = field(default_factory=dict)
    crit_elem: Dict[Subset, int] = field(default_factory=dict)
    crit_type: Dict[Subset, AtomicType] = field(default_factory=dict)
    model: Optional[FiniteModel] = None
    theta: Optional[int] = None

    def domain(self) -> List[Subset]:
        return sorted(self.rank, key=lambda w: (len(w), sorted(w)))

    def __contains__(self, w) -> bool:
        return frozenset(w) in self.rank

    def rank_of(self, w: Iterable[int]) -> Optional[OrdinalCNF]:
        return self.rank.get(frozenset(w))

    def critical_of(self, w: Iterable[int]) -> Optional[int]:
        return self.crit_elem.get(frozenset(w))

    def realizers_of(self, w: Iterable[int]) -> Optional[List[int]]:
        """Realizers of the critical type of w, None if not computable"""
        key = frozenset(w)
        if key not in self.crit_type:
            return None
        return self.crit_type[key].realizers(self.model, self.size)

    def model_rank(self) -> OrdinalCNF:
        if not self.rank:
            return OrdinalCNF.of(0)
        return max(value for value in self.rank.values()).successor()


def oracle_from_model(model: FiniteModel, theta: int) -> RankedModelOracle:
    """Oracle over every nonempty theta-independent subset"""
    engine = ThetaRank(model, theta)
    oracle = RankedModelOracle(size=model.size, model=model, theta=theta)
    for w in engine.domain():
        element, phi = engine.critical(w)
        oracle.rank[w] = OrdinalCNF.of(engine.rank(w))
        oracle.crit_elem[w] = element
        oracle.crit_type[w] = phi
    logger.info(f"Oracle over {len(oracle.rank)} sets, model rank {oracle.model_rank()}")
    return oracle


def validate_oracle(oracle: RankedModelOracle, model: Optional[FiniteModel] = None) -> ValidationReport:
    """Check the critical-drop contract and, given a model, agreement with the theta-rank.

    Args:
        oracle: Oracle to check
        model: Model to compare against; the oracle's own model is used for realizers

    Returns:
        Report with kinds critical, rank-drop and agreement
    """
    report = ValidationReport(subject="model oracle")
    evaluator = model or oracle.model
    skipped = 0
    for w in oracle.domain():
        c = oracle.crit_elem.get(w)
        phi = oracle.crit_type.get(w)
        if c is None or phi is None:
            report.add("critical", "missing critical data", witness=sorted(w))
            continue
        if c not in w:
            report.add("critical", f"critical element {c} outside the set", witness=sorted(w))
            continue
        if phi.params != tuple(sorted(w - {c})):
            report.add("critical", "critical type has the wrong parameters", witness=sorted(w))
            continue
        if evaluator is not None and not phi.satisfied_by(evaluator, c):
            report.add("critical", f"critical element {c} does not realize its type", witness=sorted(w))
            continue
        realizers = phi.realizers(evaluator, oracle.size)
        if realizers is None:
            skipped += 1
            continue
        for x in realizers:
            extended = w | {x}
            if x == c or extended == w or extended not in oracle.rank:
                continue
            if not oracle.rank[extended] < oracle.rank[w]:
                report.add("rank-drop", f"adding {x} keeps rank {oracle.rank[extended]} >= {oracle.rank[w]}",
                           witness=(sorted(w), x))
    if skipped:
        report.notes.append(f"{skipped} relational types not checked without a model")
    if model is not None:
        theta = oracle.theta
        if theta is None:
            report.notes.append("oracle carries no theta; agreement not checked")
        else:
            engine = ThetaRank(model, theta)
            expected = set(engine.domain())
            for w in sorted(expected ^ set(oracle.rank), key=lambda s: (len(s), sorted(s))):
                report.add("agreement", "domain differs from the independent sets", witness=sorted(w))
            for w in oracle.domain():
                if w not in expected:
                    continue
                if oracle.rank[w] != OrdinalCNF.of(engine.rank(w)):
                    report.add("agreement", f"rank {oracle.rank[w]} differs from {engine.rank(w)}",
                               witness=sorted(w))
                elif oracle.crit_elem.get(w) != engine.critical(w)[0]:
                    report.add("agreement", "critical element differs", witness=sorted(w))
    logger.info(f"validate_oracle: {report.summary()}")
    return report
