from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

CERTIFIED = "certified"
BOUND_QUALIFIED = "bound_qualified"
VIOLATED = "violated"

_RANK = {VIOLATED: 0, BOUND_QUALIFIED: 1, CERTIFIED: 2}


class HypothesisError(Exception):
    """A theorem-applying operation was called outside its hypotheses."""

    def __init__(self, assumption: str, message: str, witness: Any = None):
        super().__init__(f"{assumption}: {message}")
        self.assumption = assumption
        self.witness = witness


@dataclass
class Verdict:
    """Answer of a check together with how much it can be trusted.

    ``value`` is a short label ("yes", "no", "unknown", "aperiodic", ...).
    ``certification`` is ``certified`` for exact finite fixpoints,
    ``bound_qualified`` for exhaustive searches up to ``bound`` or for
    unknown outcomes, and ``violated`` when a concrete counterexample was found.
    """

    value: str
    certification: str
    witness: Any = None
    bound: tuple[int, ...] | None = None
    note: str = ""
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:  # pragma: no cover - guard against misuse
        raise TypeError("use Verdict.value, not truthiness")

    def as_dict(self) -> dict:
        from .kgraph import _jsonable

        out = {"value": self.value, "certification": self.certification}
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        if self.bound is not None:
            out["bound"] = list(self.bound)
        if self.note:
            out["note"] = self.note
        if self.details:
            out["details"] = _jsonable(self.details)
        return out


def weakest(*certs: str) -> str:
    return min(certs, key=_RANK.__getitem__) if certs else CERTIFIED


def qualify(cert: str) -> str:
    """Certification of a positive conclusion drawn from upstream verdicts."""
    return CERTIFIED if cert == CERTIFIED else BOUND_QUALIFIED
