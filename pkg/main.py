from __future__ import annotations

import argparse
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, List, Optional, Sequence
import json
import logging
import os
import sys

from ouroboros.analysis import compare_fix_image
from ouroboros.catalog import catalog, catalog_entry
from ouroboros.checker import MODES, CheckConfig, check, check_containment, check_mean_sweep
from ouroboros.config import Settings, load_settings
from ouroboros.domain import AllReals, Domain, Power, parse_domain, parse_signature
from ouroboros.errors import ArityError, DomainError, DomainSpecError, ExprSyntaxError
from ouroboros.expr import FunctionDef, define
from ouroboros.report import (
    catalog_rows,
    containment_fields,
    image_record,
    render_csv,
    render_json,
    render_text,
    sweep_csv,
    sweep_record,
    trace_record,
    verdict_record,
)
from ouroboros.slln import DistributionSpec, convergence_csv, membership_sweep, simulate_path
from ouroboros.verdict import Status

logger = logging.getLogger("ouroboros.cli")

EXIT_OK = 0
EXIT_FAILS = 1
EXIT_UNDEFINED = 2
EXIT_USAGE = 3
EXIT_ERROR = 4

EXIT_CODES = {
    Status.HOLDS: EXIT_OK,
    Status.HOLDS_PROBABLY: EXIT_OK,
    Status.FAILS: EXIT_FAILS,
    Status.UNDEFINED: EXIT_UNDEFINED,
}

FORMATS = ("text", "json", "csv")

SYNTAX_HELP = """\
function grammar (variables x1..xn):
  expr := term (("+"|"-") term)*      term := factor (("*"|"/") factor)*
  factor := unary ("^" factor)?       unary := ("-")? atom
  atom := number | xN | call | "(" expr ")"
  calls: mean(...), median(...), clamp(x, lo, hi), min(a, b), max(a, b),
         pow(a, b), abs(a), floor(a), ceil(a), round(a)

domain syntax:
  set{1,2,3}  int[-50..50]  real[0,1]  real(0,1]  real[0,inf)  R  Z
  powers R^3, mixed products "real[0,1] x int[0..9]"

exit codes: 0 holds, 1 fails, 2 undefined, 3 usage error, 4 runtime error
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


@dataclass
class RunConfig:
    """A fully validated invocation; nothing here is computed yet."""

    command: str
    check: CheckConfig
    fmt: str = "text"
    out: Optional[str] = None
    function: Optional[FunctionDef] = None
    dist: Optional[DistributionSpec] = None
    n_max: int = 1_000_000
    checkpoints: Optional[List[int]] = None
    arities: List[int] = field(default_factory=list)
    base: Domain = field(default_factory=AllReals)


def _int_list(text: str) -> List[int]:
    try:
        return [int(float(p)) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise UsageError(f"expected a comma separated list of integers, got {text!r}") from exc


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="ouroboros",
        description="Membership checks for Ouroboros spaces (idempotent functions) and SLLN simulation",
        epilog=SYNTAX_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--config", type=str, help="YAML/JSON settings file (see configs/default.yaml)")
    p.add_argument("--log-level", type=str, default="WARNING")

    # accepted after the subcommand too; SUPPRESS keeps the top-level value when absent
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=argparse.SUPPRESS)
    common.add_argument("--log-level", type=str, default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int)
    common.add_argument("--samples", type=int, help="sample count when the domain is not exhausted")
    common.add_argument("--eps-abs", dest="eps_abs", type=float)
    common.add_argument("--eps-rel", dest="eps_rel", type=float)
    common.add_argument("--mode", choices=MODES)
    common.add_argument("--format", dest="fmt", choices=FORMATS, default="text")
    common.add_argument("--out", type=str, help="write the report here instead of standard output")

    fn = argparse.ArgumentParser(add_help=False)
    fn.add_argument("--fn", type=str, help="function source, e.g. \"mean(x1,x2)\"")
    fn.add_argument("--name", type=str, help="catalog function name")
    fn.add_argument("--domain", type=str, help="domain signature, e.g. R^2")
    fn.add_argument("--codomain", type=str, help="declared codomain B")

    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    sub.add_parser("check", parents=[common, fn], help="Decide f in O(A), O(A^n) or O(mixed)")
    sub.add_parser("image", parents=[common, fn], help="Verdict plus image and fixed-point sets")

    slln = sub.add_parser("slln", parents=[common], help="Running mean of one seeded sample path")
    slln.add_argument("--dist", type=str, help="uniform(a,b) | bernoulli(p) | normal(mu,sigma) | exponential(lam)")
    slln.add_argument("--n-max", dest="n_max", type=int)
    slln.add_argument("--checkpoints", type=str, help="comma separated ascending sample sizes")

    sweep = sub.add_parser("sweep", parents=[common], help="mean_n membership across arities")
    sweep.add_argument("--dist", type=str, help="draw input vectors from this distribution")
    sweep.add_argument("--domain", type=str, help="base domain when no --dist is given (default R)")
    sweep.add_argument("--arities", type=str, help="comma separated arities, e.g. 2,4,8")

    sub.add_parser("catalog", parents=[common], help="List the ready-made functions")
    return p


def override_cfg(cfg: CheckConfig, args: argparse.Namespace) -> CheckConfig:
    return cfg.with_overrides(
        seed=args.seed,
        sample_count=args.samples,
        eps_abs=args.eps_abs,
        eps_rel=args.eps_rel,
        mode=args.mode,
    )


def build_function(args: argparse.Namespace) -> FunctionDef:
    if args.fn and args.name:
        raise UsageError("use either --fn or --name, not both")
    codomain = parse_domain(args.codomain) if args.codomain else None
    if args.fn:
        if not args.domain:
            raise UsageError("--fn needs --domain")
        return define("fn", args.fn, parse_signature(args.domain), codomain)
    if args.name:
        try:
            f = catalog_entry(args.name)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
        if args.domain:
            return f.with_signature(parse_signature(args.domain), codomain or f.codomain)
        return replace(f, codomain=codomain) if codomain else f
    raise UsageError("give a function with --fn or --name")


def prepare(args: argparse.Namespace, settings: Settings) -> RunConfig:
    """Validate every flag and resolve the run before any computation."""

    cfg = override_cfg(settings.check, args)
    rc = RunConfig(command=args.cmd, check=cfg, fmt=args.fmt, out=args.out)
    if args.cmd in ("check", "image"):
        rc.function = build_function(args)
        if cfg.mode == "exhaustive" and not rc.function.signature.finite:
            raise UsageError(f"--mode exhaustive needs a finite domain, got {rc.function.signature.label}")
    elif args.cmd == "slln":
        rc.dist = DistributionSpec.parse(args.dist or settings.slln.dist)
        rc.n_max = args.n_max if args.n_max is not None else settings.slln.n_max
        rc.checkpoints = _int_list(args.checkpoints) if args.checkpoints else settings.slln.checkpoints
        if rc.n_max < 1:
            raise UsageError("--n-max must be >= 1")
        if rc.checkpoints and (rc.checkpoints[0] < 1 or rc.checkpoints[-1] > rc.n_max or any(b <= a for a, b in zip(rc.checkpoints, rc.checkpoints[1:]))):
            raise UsageError("--checkpoints must be positive, strictly ascending and not exceed --n-max")
    elif args.cmd == "sweep":
        rc.arities = _int_list(args.arities) if args.arities else list(settings.arities)
        if not rc.arities or min(rc.arities) < 1:
            raise UsageError("--arities must list integers >= 1")
        if args.dist:
            rc.dist = DistributionSpec.parse(args.dist)
            if any(b <= a for a, b in zip(rc.arities, rc.arities[1:])):
                raise UsageError("--arities must be ascending with --dist")
        if args.domain:
            sig = parse_signature(args.domain)
            if not isinstance(sig, Power) or sig.n != 1:
                raise UsageError("--domain for sweep is the scalar base, e.g. R or int[0..100]")
            rc.base = sig.base
        if cfg.mode == "exhaustive" and (rc.dist is not None or not rc.base.finite):
            raise UsageError("--mode exhaustive needs a finite --domain and no --dist")
    return rc


# -- commands -------------------------------------------------------------------


def do_check(rc: RunConfig) -> tuple[str, int]:
    f = rc.function
    assert f is not None
    verdict = check(f, rc.check)
    record = verdict_record(f, verdict, rc.check)
    record["containment"] = containment_fields(check_containment(f, rc.check))
    return _render(record, rc.fmt, [record]), EXIT_CODES[verdict.status]


def do_image(rc: RunConfig) -> tuple[str, int]:
    f = rc.function
    assert f is not None
    verdict = check(f, rc.check)
    try:
        report = compare_fix_image(f, rc.check)
    except DomainError as exc:
        logger.info("image of %s is undefined: %s", f.name, exc)
        report = None
    record = image_record(f, verdict, report, rc.check)
    return _render(record, rc.fmt, [record]), EXIT_CODES[verdict.status]


def do_slln(rc: RunConfig) -> tuple[str, int]:
    assert rc.dist is not None
    trace = simulate_path(rc.dist, rc.n_max, rc.checkpoints, rc.check.seed)
    if rc.fmt == "csv":
        return convergence_csv(trace), EXIT_OK
    record = trace_record(trace, rc.check)
    return (render_json(record) if rc.fmt == "json" else render_text(record)), EXIT_OK


def do_sweep(rc: RunConfig) -> tuple[str, int]:
    if rc.dist is not None:
        results = membership_sweep(rc.dist, rc.arities, rc.check)
        record = sweep_record(results, rc.check, "R", rc.dist.label)
    else:
        results = check_mean_sweep(rc.arities, rc.check, rc.base)
        record = sweep_record(results, rc.check, rc.base.label, scale=rc.check.window)
    statuses = {v.status for _, v in results}
    code = EXIT_OK
    if Status.UNDEFINED in statuses:
        code = EXIT_UNDEFINED
    elif Status.FAILS in statuses:
        code = EXIT_FAILS
    if rc.fmt == "csv":
        return sweep_csv(results), code
    return _render(record, rc.fmt, record["results"]), code


def do_catalog(rc: RunConfig) -> tuple[str, int]:
    rows = catalog_rows(catalog())
    record = {"functions": rows, "seed": rc.check.seed, "config": rc.check.to_dict()}
    return _render(record, rc.fmt, rows), EXIT_OK


COMMANDS: Dict[str, Callable[[RunConfig], tuple]] = {
    "check": do_check,
    "image": do_image,
    "slln": do_slln,
    "sweep": do_sweep,
    "catalog": do_catalog,
}


def _render(record: Dict[str, Any], fmt: str, rows: Sequence[Dict[str, Any]]) -> str:
    if fmt == "json":
        return render_json(record)
    if fmt == "csv":
        return render_csv(rows)
    return render_text(record)


def emit(text: str, out: Optional[str]) -> None:
    if out:
        parent = os.path.dirname(out)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(out, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(
            level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
            stream=sys.stderr,
            format="%(levelname)s %(name)s: %(message)s",
            force=True,
        )
        rc = prepare(args, load_settings(args.config))
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (UsageError, ExprSyntaxError, ArityError, DomainSpecError, ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(SYNTAX_HELP, file=sys.stderr)
        return EXIT_USAGE

    try:
        text, code = COMMANDS[rc.command](rc)
        if rc.fmt == "csv":
            # csv output has no header record
            print(f"seed={rc.check.seed} config={json.dumps(rc.check.to_dict())}", file=sys.stderr)
        emit(text, rc.out)
    except Exception as exc:
        logger.debug("%s failed", rc.command, exc_info=True)
        print(f"error: {rc.command} failed: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
