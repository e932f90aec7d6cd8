"""Seeded Monte Carlo view of the strong law of large numbers.

A seed stands for one outcome of the sample space; `simulate_path` follows one
sample path and records its running mean at ascending checkpoints (prefix sums of a
single draw sequence, never independent re-draws). "Almost surely" is
operationalized by `seed_batch`: the fraction of fixed seeds whose final error is
inside a bound of several standard errors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple
import csv
import io
import logging
import math
import re

import numpy as np

from .catalog import mean_function
from .checker import CheckConfig, check
from .domain import AllReals
from .expr import FunctionDef
from .verdict import Verdict

logger = logging.getLogger(__name__)

FAMILIES = ("uniform", "bernoulli", "normal", "exponential")
_NON_INTEGRABLE = ("cauchy",)
_PARAM_COUNT = {"uniform": 2, "bernoulli": 1, "normal": 2, "exponential": 1}
_SPEC = re.compile(r"\s*([a-z]+)\s*\((.*)\)\s*")

CHUNK = 1 << 16


@dataclass(frozen=True)
class DistributionSpec:
    """An integrable i.i.d. source: uniform(a,b), bernoulli(p), normal(mu,sigma), exponential(lam)."""

    family: str
    params: Tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if self.family in _NON_INTEGRABLE:
            raise ValueError(f"{self.family} is not integrable; the law of large numbers does not apply")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown distribution {self.family!r}; use one of {', '.join(FAMILIES)}")
        if len(self.params) != _PARAM_COUNT[self.family]:
            raise ValueError(f"{self.family} takes {_PARAM_COUNT[self.family]} parameter(s), got {len(self.params)}")
        if not all(math.isfinite(p) for p in self.params):
            raise ValueError("distribution parameters must be finite")
        p = self.params
        if self.family == "uniform" and not p[0] < p[1]:
            raise ValueError(f"uniform needs a < b, got {p[0]}, {p[1]}")
        if self.family == "bernoulli" and not 0.0 <= p[0] <= 1.0:
            raise ValueError(f"bernoulli needs 0 <= p <= 1, got {p[0]}")
        if self.family == "normal" and not p[1] > 0:
            raise ValueError(f"normal needs sigma > 0, got {p[1]}")
        if self.family == "exponential" and not p[0] > 0:
            raise ValueError(f"exponential needs lambda > 0, got {p[0]}")

    @classmethod
    def uniform(cls, a: float = 0.0, b: float = 1.0) -> "DistributionSpec":
        return cls("uniform", (a, b))

    @classmethod
    def bernoulli(cls, p: float) -> "DistributionSpec":
        return cls("bernoulli", (p,))

    @classmethod
    def normal(cls, mu: float = 0.0, sigma: float = 1.0) -> "DistributionSpec":
        return cls("normal", (mu, sigma))

    @classmethod
    def exponential(cls, lam: float = 1.0) -> "DistributionSpec":
        return cls("exponential", (lam,))

    @classmethod
    def parse(cls, text: str) -> "DistributionSpec":
        m = _SPEC.fullmatch(text.lower())
        if m is None:
            raise ValueError(f"cannot parse distribution {text!r}; expected e.g. uniform(0,1)")
        args = [a for a in m.group(2).split(",") if a.strip()]
        try:
            params = tuple(float(a) for a in args)
        except ValueError as exc:
            raise ValueError(f"bad parameter in {text!r}") from exc
        return cls(m.group(1), params)

    @property
    def analytic_mean(self) -> float:
        p = self.params
        if self.family == "uniform":
            return (p[0] + p[1]) / 2.0
        if self.family == "bernoulli":
            return p[0]
        if self.family == "normal":
            return p[0]
        return 1.0 / p[0]

    @property
    def std(self) -> float:
        p = self.params
        if self.family == "uniform":
            return (p[1] - p[0]) / math.sqrt(12.0)
        if self.family == "bernoulli":
            return math.sqrt(p[0] * (1.0 - p[0]))
        if self.family == "normal":
            return p[1]
        return 1.0 / p[0]

    def standard_error(self, n: int) -> float:
        return self.std / math.sqrt(n)

    @property
    def label(self) -> str:
        return f"{self.family}({','.join(_fmt(p) for p in self.params)})"

    def draw(self, rng: np.random.Generator, size) -> np.ndarray:
        p = self.params
        if self.family == "uniform":
            return rng.uniform(p[0], p[1], size=size)
        if self.family == "bernoulli":
            return (rng.random(size=size) < p[0]).astype(float)
        if self.family == "normal":
            return rng.normal(p[0], p[1], size=size)
        return rng.exponential(1.0 / p[0], size=size)


def _fmt(x: float) -> str:
    return str(int(x)) if x.is_integer() and abs(x) < 1e16 else repr(x)


@dataclass(frozen=True)
class ConvergenceTrace:
    distribution: str
    seed: int
    n_max: int
    n_checkpoints: Tuple[int, ...]
    running_means: Tuple[float, ...]
    analytic_mean: float

    @property
    def abs_errors(self) -> Tuple[float, ...]:
        return tuple(abs(m - self.analytic_mean) for m in self.running_means)

    @property
    def final_abs_error(self) -> float:
        return self.abs_errors[-1]


def default_checkpoints(n_max: int) -> List[int]:
    """1, 2, 4, ... up to n_max, always ending at n_max."""

    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    points = []
    n = 1
    while n < n_max:
        points.append(n)
        n *= 2
    points.append(n_max)
    return points


def _validate_checkpoints(checkpoints: Sequence[int], n_max: int) -> Tuple[int, ...]:
    cps = tuple(int(c) for c in checkpoints)
    if not cps:
        raise ValueError("at least one checkpoint is required")
    if cps[0] < 1 or any(b <= a for a, b in zip(cps, cps[1:])):
        raise ValueError(f"checkpoints must be positive and strictly ascending, got {list(cps)}")
    if cps[-1] > n_max:
        raise ValueError(f"checkpoint {cps[-1]} exceeds n_max {n_max}")
    return cps


def simulate_path(
    d: DistributionSpec, n_max: int, checkpoints: Optional[Sequence[int]] = None, seed: int = 42
) -> ConvergenceTrace:
    """Running mean of one seeded sample path, recorded at each checkpoint.

    Draws stop at the last checkpoint; later draws would not change any record.
    """

    cps = _validate_checkpoints(checkpoints if checkpoints is not None else default_checkpoints(n_max), n_max)
    rng = np.random.default_rng(seed)
    total = 0.0
    drawn = 0
    means: List[float] = []
    for target in cps:
        segment = 0.0
        while drawn < target:
            m = min(CHUNK, target - drawn)
            segment += float(d.draw(rng, m).sum())
            drawn += m
        total += segment
        means.append(total / target)
    logger.debug("%s seed %d: mean %.6g after %d draws", d.label, seed, means[-1], drawn)
    return ConvergenceTrace(d.label, seed, n_max, cps, tuple(means), d.analytic_mean)


@dataclass(frozen=True)
class BatchSummary:
    distribution: str
    n: int
    bound: float
    errors: Tuple[float, ...]

    @property
    def total(self) -> int:
        return len(self.errors)

    @property
    def passed(self) -> int:
        return sum(1 for e in self.errors if e <= self.bound)

    def accepted(self, required_fraction: float = 0.95) -> bool:
        return self.passed >= math.ceil(required_fraction * self.total)


def seed_batch(d: DistributionSpec, n_max: int, seeds: Sequence[int], bound: float) -> BatchSummary:
    """Final running-mean error at n_max for each seed, against one bound."""

    errors = tuple(simulate_path(d, n_max, [n_max], seed).final_abs_error for seed in seeds)
    summary = BatchSummary(d.label, n_max, bound, errors)
    logger.info("%s n=%d: %d/%d seeds within %g", d.label, n_max, summary.passed, summary.total, bound)
    return summary


@dataclass(frozen=True)
class NestedAverage:
    pooled_mean: float
    mean_of_means: float

    @property
    def defect(self) -> float:
        return abs(self.pooled_mean - self.mean_of_means)


def average_of_averages(d: DistributionSpec, batches: int, batch_size: int, seed: int = 42) -> NestedAverage:
    """The mean of equal-size batch means against the pooled mean of the same draws."""

    if batches < 1 or batch_size < 1:
        raise ValueError("batches and batch_size must be >= 1")
    draws = d.draw(np.random.default_rng(seed), (batches, batch_size))
    batch_means = [math.fsum(row) / batch_size for row in draws.tolist()]
    outer = mean_function(batches)
    return NestedAverage(math.fsum(draws.ravel().tolist()) / draws.size, float(outer.apply(batch_means)))


def _sampler_for(d: DistributionSpec, n: int):
    rows = max(1, CHUNK // n)

    def sample(k: int, rng: np.random.Generator) -> Iterator[List[float]]:
        done = 0
        while done < k:
            m = min(rows, k - done)
            yield from d.draw(rng, (m, n)).tolist()
            done += m

    return sample


def membership_sweep(d: DistributionSpec, n_values: Sequence[int], cfg: CheckConfig) -> List[Tuple[int, Verdict]]:
    """mean_n in O(R^n) for each n, with input vectors drawn from `d`."""

    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise ValueError(f"n_values must be ascending, got {list(n_values)}")
    results: List[Tuple[int, Verdict]] = []
    for n in n_values:
        f: FunctionDef = mean_function(n, AllReals())
        results.append((n, check(f, cfg, sampler=_sampler_for(d, n))))
    return results


def defect_bound(n: int, scale: float, c: float = 4.0) -> float:
    """c * n * ulp(scale): the rounding-only allowance for mean_n's defect."""

    return c * n * math.ulp(max(abs(scale), 1.0))


def convergence_csv(trace: ConvergenceTrace) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "running_mean", "analytic_mean", "abs_error"])
    for n, mean, err in zip(trace.n_checkpoints, trace.running_means, trace.abs_errors):
        writer.writerow([n, repr(mean), repr(trace.analytic_mean), repr(err)])
    return buf.getvalue()
