"""Machine-checkable verdict reports shared by the checks and the CLI."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ClaimCheck:
    """One measured claim: description, value, threshold, verdict."""

    description: str
    measured: float
    threshold: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "description": self.description,
            "measured": float(self.measured),
            "threshold": float(self.threshold),
            "passed": bool(self.passed),
        }


@dataclass(frozen=True)
class CounterexampleReport:
    """Named bundle of claims; passes only if every claim passes."""

    name: str
    claims: tuple[ClaimCheck, ...]

    def __post_init__(self):
        object.__setattr__(self, "claims", tuple(self.claims))

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.claims)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "overall": self.overall,
            "claims": [c.to_dict() for c in self.claims],
        }

    def to_text(self) -> str:
        lines = [f"[{'PASS' if self.overall else 'FAIL'}] {self.name}"]
        for c in self.claims:
            mark = "ok" if c.passed else "FAIL"
            lines.append(
                f"    {mark:4s} {c.description}: measured {c.measured:.6g} "
                f"vs threshold {c.threshold:.6g}"
            )
        return "\n".join(lines)


def merge_worst(reports: list[CounterexampleReport], name: str) -> CounterexampleReport:
    """Collapse same-shaped reports (e.g. one per seed) into a worst-case one.

    For claims that pass by staying under the threshold the worst case is the
    largest measured value; claim descriptions must line up across reports.
    """
    if not reports:
        raise ValueError("no reports to merge")
    k = len(reports[0].claims)
    merged = []
    for i in range(k):
        desc = reports[0].claims[i].description
        picked = max((r.claims[i] for r in reports), key=lambda c: (not c.passed, c.measured))
        merged.append(
            ClaimCheck(
                description=desc,
                measured=picked.measured,
                threshold=picked.threshold,
                passed=all(r.claims[i].passed for r in reports),
            )
        )
    return CounterexampleReport(name=name, claims=tuple(merged))
