from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class VerdictReport:
    """Outcome of one inequality or criterion check.

    ``lhs``/``rhs`` are the two compared numbers (``holds`` means lhs >= rhs
    up to ``tolerance`` unless ``relation`` says otherwise); ``details``
    carries every intermediate quantity that fed the comparison.
    """

    name: str
    holds: bool
    lhs: float = float("nan")
    rhs: float = float("nan")
    tolerance: float = 0.0
    relation: str = ">="
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def margin(self):
        if self.relation in (">=", ">"):
            return self.lhs - self.rhs
        if self.relation == "==":
            return self.tolerance - abs(self.lhs - self.rhs)
        return self.rhs - self.lhs

    def to_dict(self):
        return {
            "name": self.name,
            "holds": bool(self.holds),
            "lhs": float(self.lhs),
            "rhs": float(self.rhs),
            "relation": self.relation,
            "tolerance": float(self.tolerance),
            "details": self.details,
        }


def compare(name, lhs, rhs, tolerance=0.0, relation=">=", **details):
    lhs, rhs = float(lhs), float(rhs)
    if relation == ">=":
        ok = lhs >= rhs - tolerance
    elif relation == ">":
        ok = lhs > rhs - tolerance
    elif relation == "<=":
        ok = lhs <= rhs + tolerance
    elif relation == "<":
        ok = lhs < rhs + tolerance
    elif relation == "==":
        ok = abs(lhs - rhs) <= tolerance
    else:
        raise ValueError(f"unknown relation {relation!r}")
    return VerdictReport(name, bool(ok), lhs, rhs, tolerance, relation, details)
