"""
Colorank Ranked Trees - Basic trees annotated with rank bounds and critical elements
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from ..core.errors import ConsistencyError, PreconditionError
from ..core.ordinal import OrdinalCNF, least_above
from ..core.report import ValidationReport
from ..core.sequences import Seq, is_prefix
from .approximation import DEFAULT_BUDGET, DEFAULT_CAP, Approximation, splits
from .basic import BasicColoringTree
from .rank import RankEngine

logger = logging.getLogger(__name__)


@dataclass
class RankedTree:
    """(T, r, c): r bounds the rank of each approximation, c picks a critical element"""

    base: BasicColoringTree
    gamma: OrdinalCNF
    r: Dict[Approximation, OrdinalCNF] = field(default_factory=dict)
    c: Dict[Approximation, Seq] = field(default_factory=dict)
    spine: bool = False

    @property
    def height(self) -> int:
        return self.base.height

    def annotate(self, a: Approximation, rank: OrdinalCNF, critical: Seq) -> None:
        self.r[a] = rank
        self.c[a] = critical

    def support(self, level: int) -> List[Seq]:
        found = set(self.base.support(level))
        if self.spine:
            found.add((0,) * level)
        return sorted(found)

    def restrict(self, height: int) -> "RankedTree":
        """Truncation to levels below height, annotations kept"""
        return RankedTree(
            base=self.base.truncate(height),
            gamma=self.gamma,
            r={a: v for a, v in self.r.items() if a.level < height},
            c={a: v for a, v in self.c.items() if a.level < height},
            spine=self.spine,
        )


def _check_pair(report: ValidationReport, R: RankedTree, a: Approximation, b: Approximation,
                strict_extension: bool = False) -> None:
    ra, rb = R.r.get(a), R.r.get(b)
    if ra is None or rb is None:
        return
    if ra < rb:
        report.add("rank-increase", f"rank grows from {ra} to {rb}", witness=(a.key(), b.key()))
    elif ra == rb:
        critical = R.c.get(a)
        if critical is not None and splits(critical, b):
            report.add("critical-split", f"critical element splits but rank stays {ra}", witness=(a.key(), b.key()))
            return
        if (strict_extension or a.size == b.size) and critical is not None:
            upper = R.c.get(b)
            if upper is None or not is_prefix(critical, upper):
                report.add("critical-extension", "critical element not extended at equal rank",
                           witness=(a.key(), b.key()))


def validate_ranked(R: RankedTree, cap: int = DEFAULT_CAP, budget: int = DEFAULT_BUDGET,
                    engine: Optional[RankEngine] = None, strict_extension: bool = False) -> ValidationReport:
    """Exhaustive check of the three ranked-tree conditions on the truncation.

    Args:
        R: Ranked tree
        cap: Approximation size cap
        budget: Approximation budget
        engine: Prebuilt engine over R.base to reuse
        strict_extension: Require c(b) to extend c(a) at equal rank whenever c(a)
            does not split in b, not only between approximations of one size

    Returns:
        Report listing every violated condition with its witnessing approximations
    """
    report = ValidationReport(subject="ranked tree")
    engine = engine or RankEngine(R.base, cap, budget)
    for a in engine.all():
        rank, critical = R.r.get(a), R.c.get(a)
        if rank is None or critical is None:
            report.add("table", "approximation lacks r or c", witness=a.key())
            continue
        if not rank < R.gamma:
            report.add("gamma", f"rank {rank} not below gamma {R.gamma}", witness=a.key())
        if critical not in a.v:
            report.add("critical", "critical element outside v", witness=a.key())
        for b in engine.successors(a):
            _check_pair(report, R, a, b, strict_extension)
        if a.size > 2:
            for size in range(2, a.size):
                for members in itertools.combinations(a.v, size):
                    sub = a.sub(members)
                    sub_rank = R.r.get(sub)
                    if sub_rank is not None and sub_rank < rank:
                        report.add("subset-rank", f"subset rank {sub_rank} below {rank}",
                                   witness=(a.key(), sub.key()))
    logger.info(f"validate_ranked: {report.summary()}")
    return report


def derive_ranked(tree: BasicColoringTree, cap: int = DEFAULT_CAP,
                  budget: int = DEFAULT_BUDGET) -> RankedTree:
    """Ranked structure on a basic tree from its computed ranks.

    r is the truncation rank. c is a critical element: the extension of the
    highest equal-rank predecessor's choice when that choice does not split,
    else the least. Such an extension is always critical, so the result
    satisfies the extension condition between approximations of any sizes.
    """
    engine = RankEngine(tree, cap, budget)
    values = engine.values()
    R = RankedTree(base=tree, gamma=OrdinalCNF.of(1))
    predecessors: Dict[Approximation, List[Approximation]] = {}
    for a in engine.all():
        for b in engine.successors(a):
            predecessors.setdefault(b, []).append(a)
    for n in sorted(engine.by_level):
        for a in engine.by_level[n]:
            critical_points = engine.critical_points(a)
            if not critical_points:
                raise PreconditionError(f"no critical element for {a}")
            choice = critical_points[0]
            inherited = [
                p for p in predecessors.get(a, ())
                if values[p] == values[a] and not splits(R.c[p], a)
            ]
            if inherited:
                top = max(inherited, key=lambda p: p.level)
                extension = a.extensions_of(R.c[top])[0]
                if extension not in critical_points:
                    raise ConsistencyError(f"inherited critical element is not critical for {a}")
                choice = extension
            R.annotate(a, OrdinalCNF.of(values[a]), choice)
    R.gamma = least_above(R.r.values())
    logger.info(f"derive_ranked: {len(R.r)} approximations, gamma={R.gamma}")
    return R


def check_rank_bound(R: RankedTree, cap: int = DEFAULT_CAP, budget: int = DEFAULT_BUDGET,
                     engine: Optional[RankEngine] = None) -> ValidationReport:
    """Report approximations whose truncation rank exceeds r"""
    report = ValidationReport(subject="rank bound")
    engine = engine or RankEngine(R.base, cap, budget)
    for a, value in engine.values().items():
        bound = R.r.get(a)
        if bound is None:
            report.add("table", "approximation lacks r", witness=a.key())
        elif OrdinalCNF.of(value) > bound:
            report.add("bound", f"rank {value} exceeds r = {bound}", witness=a.key())
    return report
