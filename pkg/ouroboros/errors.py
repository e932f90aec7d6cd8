from __future__ import annotations

from typing import Iterable, Optional, Tuple


class OuroborosError(Exception):
    """Base class for errors raised by the ouroboros package."""


class ExprSyntaxError(OuroborosError, ValueError):
    """Malformed expression source.

    Carries the 1-based line/column of the offending token and the set of tokens
    the parser would have accepted there.
    """

    def __init__(self, message: str, line: int, column: int, expected: Iterable[str] = ()) -> None:
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        hint = f" (expected one of: {', '.join(sorted(self.expected))})" if self.expected else ""
        super().__init__(f"{message} at line {line}, column {column}{hint}")


class ArityError(OuroborosError, ValueError):
    """A variable index falls outside 1..n."""

    def __init__(self, index: int, arity: int) -> None:
        self.index = index
        self.arity = arity
        super().__init__(f"variable x{index} is outside the declared arity {arity}")


class DomainError(OuroborosError, ArithmeticError):
    """Evaluation is undefined at the given arguments (÷0, 0^negative, overflow...)."""

    def __init__(self, message: str, args: Optional[Tuple[object, ...]] = None) -> None:
        self.point = args
        super().__init__(message)


class NotEnumerableError(OuroborosError, TypeError):
    """enumerate() was called on an infinite domain."""


class DomainSpecError(OuroborosError, ValueError):
    """Malformed domain mini-syntax."""


class PreconditionError(OuroborosError, RuntimeError):
    """An operation was called on a function whose verdict does not allow it."""
