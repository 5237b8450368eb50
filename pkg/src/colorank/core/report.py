"""
Colorank Reports - Violation reports returned by every validator
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional


@dataclass
class Issue:
    """One violation found by a validator"""

    kind: str
    message: str
    witness: Optional[Any] = None

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "message": self.message, "witness": repr(self.witness)}


@dataclass
class ValidationReport:
    """Collected violations; empty means valid"""

    subject: str
    issues: List[Issue] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    counts: Dict[str, int] = field(default_factory=dict)

    def add(self, kind: str, message: str, witness: Optional[Any] = None) -> None:
        self.issues.append(Issue(kind=kind, message=message, witness=witness))

    def extend(self, other: "ValidationReport") -> None:
        self.issues.extend(other.issues)
        self.notes.extend(other.notes)
        for name, value in other.counts.items():
            self.counts[name] = self.counts.get(name, 0) + value

    @property
    def ok(self) -> bool:
        return not self.issues

    def kinds(self) -> List[str]:
        return sorted({issue.kind for issue in self.issues})

    def __len__(self) -> int:
        return len(self.issues)

    def summary(self) -> str:
        if self.ok:
            return f"{self.subject}: ok"
        return f"{self.subject}: {len(self.issues)} issue(s) [{', '.join(self.kinds())}]"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "subject": self.subject,
            "ok": self.ok,
            "issues": [issue.to_dict() for issue in self.issues],
            "notes": list(self.notes),
            "counts": dict(self.counts),
        }
