from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .exactkernel import ExactMatrix, format_scalar


@dataclass
class CheckReport:
    """Outcome of one exact identity check.

    A failing report always carries a ``witness``: the first mismatching
    matrix entry (row, column, both values) plus whatever context the check
    adds, e.g. which generator pair or leg placement was involved.
    """

    name: str
    passed: bool
    witness: dict[str, Any] | None = None
    details: list[CheckReport] = field(default_factory=list)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def to_json(self) -> dict:
        out: dict[str, Any] = {"name": self.name, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.details:
            out["details"] = [d.to_json() for d in self.details]
        return out

    def line(self) -> str:
        return f"[{self.status.upper()}] {self.name}"


def _fmt(x) -> str:
    try:
        return format_scalar(x)
    except TypeError:
        return str(x)


def compare_matrices(name: str, lhs: ExactMatrix, rhs: ExactMatrix, **context) -> CheckReport:
    """Exact equality check with a concrete witness on failure."""
    if lhs.dim != rhs.dim:
        return CheckReport(name, False, {"reason": "dimension mismatch", "lhs_dim": lhs.dim,
                                         "rhs_dim": rhs.dim, **context})
    pos = lhs.first_difference(rhs)
    if pos is None:
        return CheckReport(name, True)
    i, j = pos
    return CheckReport(
        name,
        False,
        {"row": i, "col": j, "lhs": _fmt(lhs[i, j]), "rhs": _fmt(rhs[i, j]), **context},
    )


def combine(name: str, parts: list[CheckReport]) -> CheckReport:
    failed = [p for p in parts if not p.passed]
    witness = None
    if failed:
        witness = {"failed": [p.name for p in failed], "first": {"check": failed[0].name, **(failed[0].witness or {})}}
    return CheckReport(name, not failed, witness, parts)
