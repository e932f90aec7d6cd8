"""Scalar domains, their finite powers and mixed Cartesian products.

A domain answers three questions: is a value a member (`contains`), what are all
members (`enumerate`, finite domains only) and what does a seeded draw look like
(`sample`). Unbounded domains are sampled from a symmetric window, 1e6 by default.

The mini-syntax understood by `parse_domain` / `parse_signature`::

    set{1,2,3}   int[-50..50]   real[0,1]   real(0,1]   real[0,inf)   R   Z
    R^3          real[0,1] x int[0..9]
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from bisect import bisect_left
from dataclasses import dataclass
from typing import ClassVar, Iterator, List, Optional, Sequence, Tuple, Union
import itertools
import math
import re

import numpy as np

from .errors import DomainSpecError, NotEnumerableError
from .tolerance import Scalar, Tolerance

DEFAULT_WINDOW = 1e6
SAMPLE_CHUNK = 1 << 16  # scalar values drawn per chunk

Point = Tuple[Scalar, ...]


def make_scalar(value: object) -> Scalar:
    """Coerce to an exact int or a finite binary64 float."""

    if isinstance(value, (bool, np.bool_)):
        return int(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        f = float(value)
        if not math.isfinite(f):
            raise ValueError(f"scalars must be finite, got {f}")
        return f
    raise TypeError(f"not a scalar: {value!r}")


def is_integral(value: Scalar) -> bool:
    return isinstance(value, int) or float(value).is_integer()


class Domain(ABC):
    """A membership-testable, samplable set of scalars."""

    finite: ClassVar[bool] = False

    @abstractmethod
    def contains(self, value: Scalar, tol: Optional[Tolerance] = None) -> bool:
        ...

    @abstractmethod
    def sample(self, k: int, rng: np.random.Generator, window: float = DEFAULT_WINDOW) -> List[Scalar]:
        ...

    def enumerate(self) -> Iterator[Scalar]:
        raise NotEnumerableError(f"{self.label} is infinite and cannot be enumerated")

    @property
    def size(self) -> Optional[int]:
        return None

    @property
    def label(self) -> str:
        return format_domain(self)

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class FiniteSet(Domain):
    values: Tuple[Scalar, ...]

    finite: ClassVar[bool] = True

    def __post_init__(self) -> None:
        seen = {}
        for v in self.values:
            s = make_scalar(v)
            seen.setdefault(s, s)
        if not seen:
            raise ValueError("a finite set needs at least one member")
        object.__setattr__(self, "values", tuple(sorted(seen.values())))

    def contains(self, value: Scalar, tol: Optional[Tolerance] = None) -> bool:
        if tol is None:
            return value in self.values
        i = bisect_left(self.values, value)
        neighbours = self.values[max(i - 1, 0): i + 1]
        return any(tol.close(value, m) for m in neighbours)

    def enumerate(self) -> Iterator[Scalar]:
        return iter(self.values)

    @property
    def size(self) -> int:
        return len(self.values)

    def sample(self, k: int, rng: np.random.Generator, window: float = DEFAULT_WINDOW) -> List[Scalar]:
        _check_count(k)
        idx = rng.integers(0, len(self.values), size=k)
        return [self.values[i] for i in idx.tolist()]


@dataclass(frozen=True)
class IntRange(Domain):
    lo: int
    hi: int

    finite: ClassVar[bool] = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", int(self.lo))
        object.__setattr__(self, "hi", int(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty integer range [{self.lo}..{self.hi}]")

    def contains(self, value: Scalar, tol: Optional[Tolerance] = None) -> bool:
        return is_integral(value) and self.lo <= value <= self.hi

    def enumerate(self) -> Iterator[Scalar]:
        return iter(range(self.lo, self.hi + 1))

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    def sample(self, k: int, rng: np.random.Generator, window: float = DEFAULT_WINDOW) -> List[Scalar]:
        _check_count(k)
        return uniform_ints(rng, self.lo, self.hi, k)


@dataclass(frozen=True)
class RealInterval(Domain):
    """Interval of reals; infinite ends are always open."""

    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self) -> None:
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi):
            raise ValueError("interval bounds must not be NaN")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if math.isinf(lo):
            object.__setattr__(self, "lo_closed", False)
        if math.isinf(hi):
            object.__setattr__(self, "hi_closed", False)
        if lo > hi or (lo == hi and not (self.lo_closed and self.hi_closed)):
            raise ValueError(f"empty interval {format_domain(self)}")
        if not (self.lo_closed or self.hi_closed) and math.nextafter(lo, math.inf) >= hi:
            raise ValueError(f"open interval {format_domain(self)} has no float strictly inside")

    def contains(self, value: Scalar, tol: Optional[Tolerance] = None) -> bool:
        v = float(value)
        above = v >= self.lo if self.lo_closed else v > self.lo
        below = v <= self.hi if self.hi_closed else v < self.hi
        return above and below

    def sample(self, k: int, rng: np.random.Generator, window: float = DEFAULT_WINDOW) -> List[Scalar]:
        _check_count(k)
        if self.lo == self.hi:
            return [self.lo] * k
        a, b = self.lo, self.hi
        if math.isinf(a) or math.isinf(b):
            # half-lines and R are sampled inside the window
            a, b = max(a, -window), min(b, window)
            if a >= b:
                a, b = (self.lo, self.lo + 2 * window) if math.isfinite(self.lo) else (self.hi - 2 * window, self.hi)
        out: List[Scalar] = []
        while len(out) < k:
            u = rng.random(size=k - len(out))
            # convex combination: b - a may overflow for very wide intervals
            draw = (a * (1.0 - u) + b * u).tolist()
            out.extend(v for v in draw if self.contains(v))
        return out


@dataclass(frozen=True)
class AllReals(Domain):
    def contains(self, value: Scalar, tol: Optional[Tolerance] = None) -> bool:
        return math.isfinite(float(value))

    def sample(self, k: int, rng: np.random.Generator, window: float = DEFAULT_WINDOW) -> List[Scalar]:
        _check_count(k)
        return rng.uniform(-window, window, size=k).tolist()


@dataclass(frozen=True)
class AllIntegers(Domain):
    def contains(self, value: Scalar, tol: Optional[Tolerance] = None) -> bool:
        return is_integral(value)

    def sample(self, k: int, rng: np.random.Generator, window: float = DEFAULT_WINDOW) -> List[Scalar]:
        _check_count(k)
        w = int(window)
        return uniform_ints(rng, -w, w, k)


def _check_count(k: int) -> None:
    if k < 1:
        raise ValueError(f"sample count must be >= 1, got {k}")


_INT64_SPAN = 1 << 63


def uniform_ints(rng: np.random.Generator, lo: int, hi: int, k: int) -> List[int]:
    """k uniform integers in [lo, hi] as python ints, for spans of any size.

    Spans beyond int64 are assembled from 62-bit words with one spare word,
    which keeps the modulo bias below 2**-62.
    """

    span = hi - lo + 1
    if span < _INT64_SPAN:
        return [lo + v for v in rng.integers(0, span, size=k).tolist()]
    words = span.bit_length() // 62 + 2
    rows = rng.integers(0, 1 << 62, size=(k, words)).tolist()
    out = []
    for row in rows:
        acc = 0
        for w in row:
            acc = (acc << 62) | w
        out.append(lo + acc % span)
    return out


# -- signatures ---------------------------------------------------------------


class DomainSignature(ABC):
    """Input domain of an n-ary function: a power A^n or a mixed product."""

    @property
    @abstractmethod
    def factors(self) -> Tuple[Domain, ...]:
        ...

    @property
    @abstractmethod
    def output_domains(self) -> Tuple[Domain, ...]:
        """Every domain an output must lie in for the composition to be defined."""

    @property
    def arity(self) -> int:
        return len(self.factors)

    @property
    def size(self) -> Optional[int]:
        total = 1
        for d in self.factors:
            if d.size is None:
                return None
            total *= d.size
        return total

    @property
    def finite(self) -> bool:
        return all(d.finite for d in self.factors)

    def enumerate(self) -> Iterator[Point]:
        return itertools.product(*(d.enumerate() for d in self.factors))

    def iter_sample(self, k: int, rng: np.random.Generator, window: float = DEFAULT_WINDOW) -> Iterator[Point]:
        """k seeded points, drawn factor by factor in chunks of about SAMPLE_CHUNK values."""

        _check_count(k)
        rows = max(1, SAMPLE_CHUNK // self.arity)
        done = 0
        while done < k:
            m = min(rows, k - done)
            columns = [d.sample(m, rng, window) for d in self.factors]
            yield from zip(*columns)
            done += m

    def sample(self, k: int, rng: np.random.Generator, window: float = DEFAULT_WINDOW) -> List[Point]:
        return list(self.iter_sample(k, rng, window))

    def escapes(self, value: Scalar, tol: Optional[Tolerance] = None) -> List[str]:
        """Labels of the output domains that do not contain `value`."""

        return [d.label for d in self.output_domains if not d.contains(value, tol)]

    @property
    def label(self) -> str:
        return format_signature(self)

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class Power(DomainSignature):
    base: Domain
    n: int = 1

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"arity must be >= 1, got {self.n}")

    @property
    def factors(self) -> Tuple[Domain, ...]:
        return (self.base,) * self.n

    @property
    def output_domains(self) -> Tuple[Domain, ...]:
        return (self.base,)


@dataclass(frozen=True)
class Mixed(DomainSignature):
    parts: Tuple[Domain, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.parts:
            raise ValueError("a mixed domain needs at least one factor")

    @property
    def factors(self) -> Tuple[Domain, ...]:
        return self.parts

    @property
    def output_domains(self) -> Tuple[Domain, ...]:
        # outputs must lie in every factor
        return tuple(dict.fromkeys(self.parts))


def signature_of(factors: Sequence[Domain]) -> DomainSignature:
    """Power when all factors are equal, Mixed otherwise."""

    factors = tuple(factors)
    if not factors:
        raise ValueError("a signature needs at least one factor")
    if all(d == factors[0] for d in factors):
        return Power(factors[0], len(factors))
    return Mixed(factors)


# -- mini-syntax ----------------------------------------------------------------

_NUM = r"[-+]?(?:inf|\d+(?:\.\d*)?(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?)"
_INT_RANGE = re.compile(r"int\[\s*([-+]?\d+)\s*\.\.\s*([-+]?\d+)\s*\]")
_REAL = re.compile(rf"real([\[(])\s*({_NUM})\s*,\s*({_NUM})\s*([\])])")
_SET = re.compile(r"set\{(.*)\}")
_POWER = re.compile(r"(.+?)\s*\^\s*(\d+)")
_PRODUCT_SEP = re.compile(r"\s+[x×]\s+")
_INT_LITERAL = re.compile(r"[-+]?\d+")


def _format_number(v: Scalar) -> str:
    if isinstance(v, int):
        return str(v)
    return repr(v)


def _format_bound(v: float) -> str:
    if math.isfinite(v) and v.is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def format_domain(d: Domain) -> str:
    if isinstance(d, FiniteSet):
        return "set{" + ",".join(_format_number(v) for v in d.values) + "}"
    if isinstance(d, IntRange):
        return f"int[{d.lo}..{d.hi}]"
    if isinstance(d, RealInterval):
        left = "[" if d.lo_closed else "("
        right = "]" if d.hi_closed else ")"
        return f"real{left}{_format_bound(d.lo)},{_format_bound(d.hi)}{right}"
    if isinstance(d, AllReals):
        return "R"
    if isinstance(d, AllIntegers):
        return "Z"
    raise TypeError(f"unknown domain {d!r}")


def format_signature(s: DomainSignature) -> str:
    if isinstance(s, Power):
        base = format_domain(s.base)
        return base if s.n == 1 else f"{base}^{s.n}"
    return " x ".join(format_domain(d) for d in s.factors)


def _parse_literal(text: str) -> Scalar:
    text = text.strip()
    if _INT_LITERAL.fullmatch(text):
        return int(text)
    try:
        return make_scalar(float(text))
    except ValueError as exc:
        raise DomainSpecError(f"bad set member {text!r}") from exc


def parse_domain(text: str) -> Domain:
    """Parse a single scalar domain; the inverse of `format_domain`."""

    src = text.strip()
    try:
        if src in ("R", "ℝ"):
            return AllReals()
        if src in ("Z", "ℤ"):
            return AllIntegers()
        m = _INT_RANGE.fullmatch(src)
        if m:
            return IntRange(int(m.group(1)), int(m.group(2)))
        m = _REAL.fullmatch(src)
        if m:
            return RealInterval(float(m.group(2)), float(m.group(3)), m.group(1) == "[", m.group(4) == "]")
        m = _SET.fullmatch(src)
        if m:
            members = [p for p in m.group(1).split(",") if p.strip()]
            return FiniteSet(tuple(_parse_literal(p) for p in members))
    except DomainSpecError:
        raise
    except ValueError as exc:
        raise DomainSpecError(f"invalid domain {text!r}: {exc}") from exc
    raise DomainSpecError(
        f"cannot parse domain {text!r}; use set{{1,2}}, int[lo..hi], real[a,b], real(a,b], R or Z"
    )


def parse_signature(text: str) -> DomainSignature:
    """Parse a power (`R^3`), a mixed product (`real[0,1] x Z`) or a single domain."""

    factors: List[Domain] = []
    for part in _PRODUCT_SEP.split(text.strip()):
        m = _POWER.fullmatch(part.strip())
        if m:
            n = int(m.group(2))
            if n < 1:
                raise DomainSpecError(f"power must be >= 1 in {part!r}")
            factors.extend([parse_domain(m.group(1))] * n)
        else:
            factors.append(parse_domain(part))
    return signature_of(factors)


def as_signature(value: Union[str, Domain, DomainSignature]) -> DomainSignature:
    if isinstance(value, DomainSignature):
        return value
    if isinstance(value, Domain):
        return Power(value, 1)
    return parse_signature(value)
