"""Pass/fail reports shared by every verifier in the package."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    witness: Any = None
    detail: str = ""

    def to_json(self) -> dict:
        out: dict[str, Any] = {"name": self.name, "verdict": "pass" if self.passed else "fail"}
        if not self.passed:
            out["witness"] = _jsonable(self.witness)
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass(frozen=True)
class Verification:
    subject: str
    checks: tuple[Check, ...] = field(default_factory=tuple)
    notes: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self) -> bool:
        return self.passed

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def names(self) -> list[str]:
        return [c.name for c in self.checks]

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def merged(self, other: Verification, prefix: str = "") -> Verification:
        extra = tuple(Check(prefix + c.name, c.passed, c.witness, c.detail) for c in other.checks)
        return Verification(self.subject, self.checks + extra, self.notes + other.notes)

    def to_json(self) -> dict:
        out = {"subject": self.subject, "checks": [c.to_json() for c in self.checks]}
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def first_failure(items: Iterable[tuple[bool, Any]]):
    """Return the witness of the first failing (ok, witness) pair, or None."""
    for ok, witness in items:
        if not ok:
            return witness
    return None


def check(name: str, failures: Iterable, detail: str = "") -> Check:
    """Build a Check from an iterator of witnesses; the first one found fails it."""
    for w in failures:
        return Check(name, False, w, detail)
    return Check(name, True, None, detail)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (int, str, bool)) or x is None:
        return x
    return str(x)
