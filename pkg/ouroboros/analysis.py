"""Image and fixed-point analysis of candidate functions.

For an idempotent f every image point y = f(x) is fixed, and every fixed point is
the image of itself, so Fix(f) = Im(f). On finite domains both sets are computed
exactly. On sampled domains the fixed-point candidates are the sampled base points
together with the sampled image, and the two sets are compared by nearest-neighbour
distance in both directions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple
import logging

import numpy as np

from .checker import CheckConfig, check, point_stream
from .domain import Domain
from .errors import DomainError, PreconditionError
from .expr import FunctionDef, diagonal, evaluate
from .tolerance import Scalar, Tolerance
from .verdict import Verdict

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PointSet:
    """Sorted distinct scalars; `exact` when the whole domain was enumerated."""

    values: Tuple[Scalar, ...]
    exact: bool
    evaluated: int

    @property
    def count(self) -> int:
        return len(self.values)

    @property
    def min(self) -> Optional[Scalar]:
        return self.values[0] if self.values else None

    @property
    def max(self) -> Optional[Scalar]:
        return self.values[-1] if self.values else None

    def as_set(self) -> set:
        return set(self.values)


@dataclass(frozen=True)
class ImageReport:
    image: PointSet
    fixed_points: PointSet
    equal: bool
    max_gap: float = 0.0


def _distinct(values: Iterable[Scalar]) -> Tuple[Scalar, ...]:
    return tuple(sorted(set(values)))


def image(f: FunctionDef, cfg: CheckConfig) -> PointSet:
    """f applied over the enumerated or sampled domain; DomainError propagates."""

    stream = point_stream(f.signature, cfg)
    outputs = []
    for x in stream.points:
        outputs.append(f.apply(x))
    return PointSet(_distinct(outputs), stream.exhaustive, len(outputs))


def _diagonal_body(f: FunctionDef):
    return f.body if f.arity == 1 else diagonal(f.body)


def _candidate_base(f: FunctionDef) -> Domain:
    """The factor fixed-point candidates are drawn from: the smallest finite one, else the first."""

    outs = f.signature.output_domains
    finite = [d for d in outs if d.size is not None]
    return min(finite, key=lambda d: d.size) if finite else outs[0]


def fixed_points(f: FunctionDef, cfg: CheckConfig, extra: Sequence[Scalar] = ()) -> PointSet:
    """Points t of the base domain with f(t) = t (f(t, ..., t) = t for n >= 2).

    `extra` adds candidates beyond the base points, normally the sampled image.
    """

    tol = cfg.tolerance
    g = _diagonal_body(f)
    base = _candidate_base(f)
    exact = cfg.mode != "sampled" and base.size is not None and base.size <= cfg.enumeration_cutoff
    if exact:
        candidates: List[Scalar] = list(base.enumerate())
    else:
        rng = np.random.default_rng([cfg.seed, 1])
        candidates = base.sample(cfg.sample_count, rng, cfg.window)
    candidates.extend(extra)

    fixed = []
    for t in candidates:
        if f.signature.escapes(t, tol):
            continue
        try:
            value = evaluate(g, (t,))
        except DomainError:
            continue
        if tol.close(value, t):
            fixed.append(t)
    logger.debug("%s: %d fixed points among %d candidates", f.name, len(fixed), len(candidates))
    return PointSet(_distinct(fixed), exact and not extra, len(candidates))


def _nearest_gaps(source: Sequence[Scalar], target: Sequence[Scalar], tol: Tolerance) -> Tuple[bool, float]:
    """Is every source value within tolerance of some target value? Also the largest gap."""

    if not source:
        return True, 0.0
    if not target:
        return False, float("inf")
    tgt = np.asarray(target, dtype=float)
    src = np.asarray(source, dtype=float)
    idx = np.searchsorted(tgt, src)
    lo = np.clip(idx - 1, 0, len(tgt) - 1)
    hi = np.clip(idx, 0, len(tgt) - 1)
    gaps = np.minimum(np.abs(src - tgt[lo]), np.abs(src - tgt[hi]))
    nearest = np.where(np.abs(src - tgt[lo]) <= np.abs(src - tgt[hi]), tgt[lo], tgt[hi])
    bounds = tol.eps_abs + tol.eps_rel * np.abs(nearest)
    return bool(np.all(gaps <= bounds)), float(gaps.max())


def compare_fix_image(f: FunctionDef, cfg: CheckConfig) -> ImageReport:
    """Im(f) against Fix(f), without requiring a positive verdict first."""

    tol = cfg.tolerance
    im = image(f, cfg)
    if im.exact:
        fix = fixed_points(f, cfg)
        if fix.exact:
            equal = im.as_set() == fix.as_set()
            return ImageReport(im, fix, equal)
    else:
        fix = fixed_points(f, cfg, extra=im.values)

    # every fixed t is the image of itself: f(t, ..., t) joins the image sample
    g = _diagonal_body(f)
    images_of_fixed = [evaluate(g, (t,)) for t in fix.values]
    im_all = _distinct(list(im.values) + images_of_fixed)
    im_in_fix, gap_a = _nearest_gaps(im_all, fix.values, tol)
    fix_in_im, gap_b = _nearest_gaps(fix.values, im_all, tol)
    image_set = PointSet(im_all, False, im.evaluated + len(images_of_fixed))
    return ImageReport(image_set, fix, im_in_fix and fix_in_im, max(gap_a, gap_b))


def verify_fix_equals_image(f: FunctionDef, cfg: CheckConfig, verdict: Optional[Verdict] = None) -> ImageReport:
    """Fix(f) = Im(f) for a function already verified Holds/HoldsProbably."""

    verdict = verdict if verdict is not None else check(f, cfg)
    if not verdict.holds:
        raise PreconditionError(f"{f.name} is not a verified member ({verdict.status.value}); Fix = Im is not expected")
    return compare_fix_image(f, cfg)
