"""Ready-made candidate functions, members and known non-members alike."""

from __future__ import annotations

from typing import Dict, List, Optional

from .domain import AllIntegers, AllReals, Domain, FiniteSet, Power, RealInterval
from .expr import FunctionDef, define, mean_expr
from .verdict import Status

MEAN_ARITIES = range(2, 17)

_R = AllReals()
_Z = AllIntegers()
_NON_NEGATIVE = RealInterval(0.0, float("inf"), True, False)
_UNIT = RealInterval(0.0, 1.0)


def mean_function(n: int, base: Optional[Domain] = None) -> FunctionDef:
    """Arithmetic mean of n arguments over base^n (R by default)."""

    base = base if base is not None else _R
    return FunctionDef(
        name=f"mean_{n}",
        body=mean_expr(n),
        signature=Power(base, n),
        codomain=base,
        expected=Status.HOLDS.value,
        description=f"(1/{n}) * sum of x1..x{n}",
    )


def const_function(c: int, base: Optional[Domain] = None) -> FunctionDef:
    return define(f"const_{c}", str(c), base if base is not None else _R, FiniteSet((c,)), Status.HOLDS.value, f"constant {c}")


def catalog() -> List[FunctionDef]:
    holds, fails, undefined = Status.HOLDS.value, Status.FAILS.value, Status.UNDEFINED.value
    entries = [
        define("identity", "x1", _R, _R, holds, "f(x) = x on R"),
        define("identity_z", "x1", _Z, _Z, holds, "f(x) = x on Z"),
        const_function(7),
    ]
    entries += [mean_function(n) for n in MEAN_ARITIES]
    entries += [
        define("floor", "floor(x1)", _R, _Z, holds),
        define("round", "round(x1)", _R, _Z, holds),
        define("abs", "abs(x1)", _NON_NEGATIVE, _NON_NEGATIVE, holds),
        define("clamp", "clamp(x1, 0, 1)", _R, _UNIT, holds, "clamp to [0, 1]"),
        define("min_2", "min(x1, x2)", Power(_R, 2), _R, holds),
        define("max_2", "max(x1, x2)", Power(_R, 2), _R, holds),
        define("median_3", "median(x1, x2, x3)", Power(_R, 3), _R, holds),
        define("succ", "x1 + 1", _R, _R, fails, "f(f(x)) = x + 2"),
        define("double", "2 * x1", _UNIT, RealInterval(0.0, 2.0), undefined, "2x leaves [0, 1]"),
    ]
    return entries


def catalog_by_name() -> Dict[str, FunctionDef]:
    return {f.name: f for f in catalog()}


def catalog_entry(name: str) -> FunctionDef:
    entries = catalog_by_name()
    if name in entries:
        return entries[name]
    if name.startswith("mean_") and name[5:].isdigit() and int(name[5:]) >= 1:
        return mean_function(int(name[5:]))
    if name.startswith("const_") and name[6:].lstrip("-").isdigit():
        return const_function(int(name[6:]))
    raise KeyError(f"no catalog function named {name!r}; known: {', '.join(sorted(entries))}")
