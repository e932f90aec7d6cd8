"""Report records and their text / json / csv renderings.

Records are plain dicts with stable field names; json output is deterministic
for fixed inputs (no timestamps, insertion-ordered keys).
"""

from __future__ import annotations

from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple
import csv
import io
import json

from .analysis import ImageReport, PointSet
from .checker import CheckConfig
from .expr import FunctionDef
from .slln import ConvergenceTrace, defect_bound
from .verdict import ContainmentReport, Verdict

PREVIEW = 20


def function_fields(f: FunctionDef) -> Dict[str, Any]:
    return {
        "function": f.name,
        "source": f.source,
        "signature": f.signature.label,
        "codomain": f.codomain.label if f.codomain is not None else None,
    }


def verdict_record(f: FunctionDef, verdict: Verdict, cfg: CheckConfig) -> Dict[str, Any]:
    record = function_fields(f)
    record.update(
        {
            "status": verdict.status.value,
            "points_checked": verdict.points_checked,
            "max_defect": verdict.max_defect,
            "exhaustive": verdict.exhaustive,
            "witness": verdict.witness.to_dict() if verdict.witness else None,
            "seed": cfg.seed,
            "config": cfg.to_dict(),
        }
    )
    return record


def containment_fields(report: ContainmentReport) -> Dict[str, Any]:
    return {
        "consistent": report.consistent,
        "points_checked": report.points_checked,
        "witness": report.witness.to_dict() if report.witness else None,
        "codomain_consistent": report.codomain_consistent,
        "codomain_witness": report.codomain_witness.to_dict() if report.codomain_witness else None,
    }


def point_set_record(points: PointSet, limit: int = PREVIEW) -> Dict[str, Any]:
    return {
        "exact": points.exact,
        "count": points.count,
        "min": points.min,
        "max": points.max,
        "values": list(points.values[:limit]),
        "truncated": points.count > limit,
    }


def image_record(f: FunctionDef, verdict: Verdict, report: Optional[ImageReport], cfg: CheckConfig) -> Dict[str, Any]:
    record = verdict_record(f, verdict, cfg)
    if report is None:
        record["image"] = None
        return record
    record["image"] = point_set_record(report.image)
    record["fixed_points"] = point_set_record(report.fixed_points)
    record["fix_equals_image"] = report.equal
    record["max_gap"] = report.max_gap
    return record


def sweep_rows(results: Sequence[Tuple[int, Verdict]], scale: float = 1.0) -> List[Dict[str, Any]]:
    return [
        {
            "n": n,
            "status": v.status.value,
            "points_checked": v.points_checked,
            "max_defect": v.max_defect,
            "defect_bound": defect_bound(n, scale),
        }
        for n, v in results
    ]


def sweep_record(
    results: Sequence[Tuple[int, Verdict]],
    cfg: CheckConfig,
    base: str,
    distribution: Optional[str] = None,
    scale: float = 1.0,
) -> Dict[str, Any]:
    return {
        "function": "mean_n",
        "signature": f"{base}^n",
        "distribution": distribution,
        "results": sweep_rows(results, scale),
        "seed": cfg.seed,
        "config": cfg.to_dict(),
    }


def trace_record(trace: ConvergenceTrace, cfg: CheckConfig) -> Dict[str, Any]:
    return {
        "distribution": trace.distribution,
        "seed": trace.seed,
        "n_max": trace.n_max,
        "analytic_mean": trace.analytic_mean,
        "final_abs_error": trace.final_abs_error,
        "checkpoints": [
            {"n": n, "running_mean": m, "abs_error": e}
            for n, m, e in zip(trace.n_checkpoints, trace.running_means, trace.abs_errors)
        ],
        "note": "one seeded sample path; almost-sure convergence is judged across many seeds",
        "config": {
            "dist": trace.distribution,
            "n_max": trace.n_max,
            "checkpoints": list(trace.n_checkpoints),
            "check": cfg.to_dict(),
        },
    }


def catalog_rows(functions: Iterable[FunctionDef]) -> List[Dict[str, Any]]:
    return [dict(function_fields(f), expected=f.expected, description=f.description) for f in functions]


# -- rendering --------------------------------------------------------------------


def render_json(record: Any) -> str:
    return json.dumps(record, indent=2) + "\n"


def _flatten(value: Any, prefix: str = "") -> List[Tuple[str, Any]]:
    if isinstance(value, dict):
        out: List[Tuple[str, Any]] = []
        for k, v in value.items():
            out.extend(_flatten(v, f"{prefix}.{k}" if prefix else str(k)))
        return out
    if isinstance(value, list) and value and isinstance(value[0], dict):
        out = []
        for i, item in enumerate(value):
            out.extend(_flatten(item, f"{prefix}[{i}]"))
        return out
    return [(prefix, value)]


def render_text(record: Dict[str, Any]) -> str:
    return "".join(f"{key}: {_text_value(v)}\n" for key, v in _flatten(record))


def _text_value(v: Any) -> str:
    if v is None:
        return "-"
    if isinstance(v, list):
        return "[" + ", ".join(_text_value(x) for x in v) + "]"
    return str(v)


def render_csv(rows: Sequence[Dict[str, Any]]) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    flat = [dict(_flatten(r)) for r in rows]
    writer = csv.DictWriter(buf, fieldnames=list(flat[0].keys()), lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for r in flat:
        writer.writerow({k: _text_value(v) if isinstance(v, list) else ("" if v is None else v) for k, v in r.items()})
    return buf.getvalue()


def sweep_csv(results: Sequence[Tuple[int, Verdict]]) -> str:
    return render_csv([{k: r[k] for k in ("n", "status", "points_checked", "max_defect")} for r in sweep_rows(results)])
