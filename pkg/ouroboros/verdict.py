from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Tuple

from .tolerance import Scalar


class Status(str, Enum):
    HOLDS = "holds"                    # every domain point enumerated
    HOLDS_PROBABLY = "holds_probably"  # sampled, no counterexample
    FAILS = "fails"                    # |f(f(x),...,f(x)) - f(x)| beyond tolerance
    UNDEFINED = "undefined"            # f(x) escapes the domain, or evaluation is undefined

    @property
    def holds(self) -> bool:
        return self in (Status.HOLDS, Status.HOLDS_PROBABLY)

    @property
    def outcome(self) -> str:
        """Status with Holds/HoldsProbably folded together."""

        return "holds" if self.holds else self.value


@dataclass(frozen=True)
class Witness:
    """The input vector that decided a negative verdict and what happened there."""

    index: int
    point: Tuple[Scalar, ...]
    output: Optional[Scalar] = None
    composed: Optional[Scalar] = None
    defect: Optional[float] = None
    escaped: Tuple[str, ...] = ()
    reason: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "index": self.index,
            "x": list(self.point),
            "fx": self.output,
            "f_fx": self.composed,
            "defect": self.defect,
            "escaped": list(self.escaped),
            "reason": self.reason,
        }


@dataclass(frozen=True)
class Verdict:
    status: Status
    points_checked: int
    max_defect: float
    exhaustive: bool
    witness: Optional[Witness] = None
    sample_count: Optional[int] = None

    @property
    def holds(self) -> bool:
        return self.status.holds


@dataclass(frozen=True)
class ContainmentReport:
    """Outcome of the image-containment precheck (f(x) must stay inside the domain)."""

    consistent: bool
    points_checked: int
    exhaustive: bool
    witness: Optional[Witness] = None
    codomain_consistent: Optional[bool] = None
    codomain_witness: Optional[Witness] = None
