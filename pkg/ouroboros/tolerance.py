from __future__ import annotations

from dataclasses import dataclass
from typing import Union
import math

Scalar = Union[int, float]


@dataclass(frozen=True)
class Tolerance:
    """Approximate equality policy: |a - b| <= eps_abs + eps_rel * |b|.

    Two exact integers are compared exactly regardless of the epsilons.
    """

    eps_abs: float = 1e-9
    eps_rel: float = 1e-9

    def __post_init__(self) -> None:
        if not (self.eps_abs >= 0 and self.eps_rel >= 0):
            raise ValueError(f"tolerances must be non-negative, got {self.eps_abs}, {self.eps_rel}")

    def bound(self, reference: Scalar) -> float:
        return self.eps_abs + self.eps_rel * abs(float(reference))

    def close(self, a: Scalar, b: Scalar) -> bool:
        if isinstance(a, int) and isinstance(b, int):
            return a == b
        return defect(a, b) <= self.bound(b)


def defect(a: Scalar, b: Scalar) -> float:
    """|a - b| as a float; exact for integers until the conversion."""

    try:
        if isinstance(a, int) and isinstance(b, int):
            return float(abs(a - b))
        return abs(float(a) - float(b))
    except OverflowError:
        return math.inf


def ulp(x: Scalar) -> float:
    return math.ulp(float(x))


EXACT = Tolerance(0.0, 0.0)
