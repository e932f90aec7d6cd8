"""Membership checks for O(A), O(A^n) and mixed domains.

Every check walks one point stream: the full domain when it is finite and no
larger than `enumeration_cutoff`, otherwise `sample_count` seeded draws. At each
point x the output y = f(x) must lie in the domain (in every factor for mixed
domains), then f(y, ..., y) is compared with y under the configured tolerance.

Aggregation: an escape or an undefined evaluation anywhere makes the verdict
Undefined; otherwise one defect beyond tolerance makes it Fails. Witnesses are
always the smallest point index of their kind.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple
import logging

import numpy as np

from .catalog import mean_function
from .domain import DEFAULT_WINDOW, AllReals, Domain, DomainSignature, Point
from .errors import DomainError, NotEnumerableError
from .expr import FunctionDef, diagonal, evaluate
from .tolerance import Scalar, Tolerance, defect
from .verdict import ContainmentReport, Status, Verdict, Witness

logger = logging.getLogger(__name__)

MODES = ("auto", "exhaustive", "sampled")

Sampler = Callable[[int, np.random.Generator], Iterable[Point]]


@dataclass(frozen=True)
class CheckConfig:
    sample_count: int = 10_000
    enumeration_cutoff: int = 100_000
    eps_abs: float = 1e-9
    eps_rel: float = 1e-9
    seed: int = 42
    window: float = DEFAULT_WINDOW
    mode: str = "auto"

    def __post_init__(self) -> None:
        if self.sample_count < 1:
            raise ValueError(f"sample_count must be >= 1, got {self.sample_count}")
        if self.enumeration_cutoff < 0:
            raise ValueError(f"enumeration_cutoff must be >= 0, got {self.enumeration_cutoff}")
        if not (self.eps_abs >= 0 and self.eps_rel >= 0):
            raise ValueError("eps_abs and eps_rel must be >= 0")
        if not self.window > 0:
            raise ValueError(f"window must be > 0, got {self.window}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")

    @property
    def tolerance(self) -> Tolerance:
        return Tolerance(self.eps_abs, self.eps_rel)

    @classmethod
    def from_dict(cls, data: Optional[Dict[str, Any]]) -> "CheckConfig":
        data = dict(data or {})
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValueError(f"unknown check settings: {', '.join(unknown)}")
        return cls(**data)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def with_overrides(self, **overrides: Any) -> "CheckConfig":
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


@dataclass
class PointStream:
    points: Iterable[Point]
    exhaustive: bool
    planned: int


def point_stream(signature: DomainSignature, cfg: CheckConfig, sampler: Optional[Sampler] = None) -> PointStream:
    """Exhaust the signature below the cutoff, sample it above."""

    size = signature.size
    if cfg.mode == "exhaustive" and size is None:
        raise NotEnumerableError(f"{signature.label} is infinite; exhaustive mode is impossible")
    exhaust = (
        sampler is None
        and size is not None
        and cfg.mode != "sampled"
        and (cfg.mode == "exhaustive" or size <= cfg.enumeration_cutoff)
    )
    if exhaust:
        logger.debug("enumerating %s (%d points)", signature.label, size)
        return PointStream(signature.enumerate(), True, size)
    rng = np.random.default_rng(cfg.seed)
    if sampler is not None:
        points = sampler(cfg.sample_count, rng)
    else:
        points = signature.iter_sample(cfg.sample_count, rng, cfg.window)
    logger.debug("sampling %s: %d points, seed %d", signature.label, cfg.sample_count, cfg.seed)
    return PointStream(points, False, cfg.sample_count)


def _escape_witness(index: int, x: Point, y: Scalar, escaped: Sequence[str]) -> Witness:
    return Witness(index, tuple(x), output=y, escaped=tuple(escaped), reason=f"f(x) = {y!r} lies outside {', '.join(escaped)}")


def _undefined_witness(index: int, x: Point, exc: DomainError, stage: str, y: Optional[Scalar] = None) -> Witness:
    return Witness(index, tuple(x), output=y, reason=f"{stage} is undefined: {exc}")


def check_containment(f: FunctionDef, cfg: CheckConfig) -> ContainmentReport:
    """Report the first x whose output leaves the domain (every factor, if mixed)."""

    tol = cfg.tolerance
    stream = point_stream(f.signature, cfg)
    codomain_witness: Optional[Witness] = None
    checked = 0
    for i, x in enumerate(stream.points):
        checked += 1
        try:
            y = f.apply(x)
        except DomainError as exc:
            w = _undefined_witness(i, x, exc, "f(x)")
            return ContainmentReport(False, checked, stream.exhaustive, w)
        escaped = f.signature.escapes(y, tol)
        if escaped:
            logger.info("%s: escape at point %d, f%s = %r", f.name, i, tuple(x), y)
            return ContainmentReport(False, checked, stream.exhaustive, _escape_witness(i, x, y, escaped))
        if f.codomain is not None and codomain_witness is None and not f.codomain.contains(y, tol):
            codomain_witness = _escape_witness(i, x, y, [f.codomain.label])
    codomain_ok = None if f.codomain is None else codomain_witness is None
    return ContainmentReport(True, checked, stream.exhaustive, None, codomain_ok, codomain_witness)


Compose = Callable[[Scalar], Scalar]


def _run(f: FunctionDef, cfg: CheckConfig, compose: Compose, sampler: Optional[Sampler] = None) -> Verdict:
    tol = cfg.tolerance
    stream = point_stream(f.signature, cfg, sampler)
    sample_count = None if stream.exhaustive else stream.planned
    checked = 0
    max_defect = 0.0
    failure: Optional[Witness] = None
    for i, x in enumerate(stream.points):
        checked += 1
        try:
            y = f.apply(x)
        except DomainError as exc:
            w = _undefined_witness(i, x, exc, "f(x)")
            return Verdict(Status.UNDEFINED, checked, max_defect, stream.exhaustive, w, sample_count)
        escaped = f.signature.escapes(y, tol)
        if escaped:
            w = _escape_witness(i, x, y, escaped)
            return Verdict(Status.UNDEFINED, checked, max_defect, stream.exhaustive, w, sample_count)
        try:
            z = compose(y)
        except DomainError as exc:
            w = _undefined_witness(i, x, exc, "f(f(x), ..., f(x))", y)
            return Verdict(Status.UNDEFINED, checked, max_defect, stream.exhaustive, w, sample_count)
        d = defect(z, y)
        if d > max_defect:
            max_defect = d
        if failure is None and not tol.close(z, y):
            failure = Witness(i, tuple(x), y, z, d, reason=f"f(f(x), ..., f(x)) = {z!r} differs from f(x) = {y!r}")

    if failure is not None:
        status = Status.FAILS
    else:
        status = Status.HOLDS if stream.exhaustive else Status.HOLDS_PROBABLY
    logger.info("%s on %s: %s after %d points (max defect %g)", f.name, f.signature.label, status.value, checked, max_defect)
    return Verdict(status, checked, max_defect, stream.exhaustive, failure, sample_count)


def check_univariate(f: FunctionDef, cfg: CheckConfig) -> Verdict:
    """f(f(x)) = f(x) for every x in A."""

    if f.arity != 1:
        raise ValueError(f"{f.name} has arity {f.arity}; check_univariate needs 1")
    return _run(f, cfg, lambda y: f.apply((y,)))


def check_multivariate(f: FunctionDef, cfg: CheckConfig, sampler: Optional[Sampler] = None) -> Verdict:
    """f(f(x), ..., f(x)) = f(x) for every x in A^n or the mixed product.

    The single value y = f(x) is duplicated into all n argument slots.
    """

    if f.arity < 2:
        raise ValueError(f"{f.name} has arity {f.arity}; check_multivariate needs >= 2")
    n = f.arity
    return _run(f, cfg, lambda y: f.apply((y,) * n), sampler)


def check_diagonal(f: FunctionDef, cfg: CheckConfig) -> Verdict:
    """t = f(x), then test the one-variable diagonal g(t) = f(t, ..., t) against t."""

    if f.arity < 2:
        raise ValueError(f"{f.name} has arity {f.arity}; check_diagonal needs >= 2")
    g = diagonal(f.body)
    return _run(f, cfg, lambda t: evaluate(g, (t,)))


def check(f: FunctionDef, cfg: CheckConfig, sampler: Optional[Sampler] = None) -> Verdict:
    if f.arity == 1:
        if sampler is None:
            return check_univariate(f, cfg)
        return _run(f, cfg, lambda y: f.apply((y,)), sampler)
    return check_multivariate(f, cfg, sampler)


def check_mean_sweep(
    n_values: Sequence[int], cfg: CheckConfig, base: Optional[Domain] = None
) -> List[Tuple[int, Verdict]]:
    """mean_n over base^n (R by default) for each n."""

    base = base if base is not None else AllReals()
    results: List[Tuple[int, Verdict]] = []
    for n in n_values:
        if n < 1:
            raise ValueError(f"arity must be >= 1, got {n}")
        results.append((n, check(mean_function(n, base), cfg)))
    return results
