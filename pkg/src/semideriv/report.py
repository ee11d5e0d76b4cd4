"""Error kinds, verification reports and JSON encoding."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class SemiderivError(Exception):
    pass


class SpecError(SemiderivError, ValueError):
    """Malformed spec string, literal or parameter."""


class CapabilityError(SemiderivError):
    """An operation was asked of a carrier or family that cannot support it."""

    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness


class BudgetExceeded(SemiderivError):
    pass


class NotMemberError(SemiderivError, ValueError):
    pass


class NotCentralError(CapabilityError):
    """The multiplier of an inner derivation fails to commute with some member."""


def to_jsonable(x: Any) -> Any:
    """Encode elements, matrices and reports for ``json.dumps``.

    -inf becomes ``null``; polynomials become coefficient lists.
    """
    from .semiring import NEG_INF, PolyNat

    if x is NEG_INF or x is None:
        return None
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, PolyNat):
        return list(x.coeffs)
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, (str, float)):
        return x
    return repr(x)


@dataclass
class CheckResult:
    """One identity checked over many inputs; keeps the first few failures."""

    name: str
    checked: int = 0
    failures: int = 0
    witnesses: list = field(default_factory=list)
    informational: bool = False
    note: str | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, ok: bool, witness: dict | None = None, max_witnesses: int = 3) -> None:
        self.checked += 1
        if not ok:
            self.failures += 1
            if witness is not None and len(self.witnesses) < max_witnesses:
                self.witnesses.append(witness)

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "status": "pass" if self.passed else "fail",
            "checked": self.checked,
            "failures": self.failures,
            "witnesses": to_jsonable(self.witnesses),
        }
        if self.informational:
            out["informational"] = True
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class VerificationReport:
    check: str
    mode: str
    results: list[CheckResult]
    seed: int | None = None
    counts: dict = field(default_factory=dict)
    preconditions: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results if not r.informational) and all(
            p["satisfied"] for p in self.preconditions
        )

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    @property
    def witnesses(self) -> list:
        return [w for r in self.results if not r.informational for w in r.witnesses]

    def result(self, name: str) -> CheckResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_json(self) -> dict:
        mode: Any = self.mode
        if self.mode == "sampled":
            mode = {"sampled": {"seed": self.seed, "count": self.counts.get("samples")}}
        return {
            "check": self.check,
            "mode": mode,
            "status": self.status,
            "counts": to_jsonable(self.counts),
            "preconditions": to_jsonable(self.preconditions),
            "results": [r.to_json() for r in self.results],
        }
