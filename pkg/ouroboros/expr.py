"""Expression DSL for candidate functions.

Grammar (positional variables x1..xn)::

    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := unary ("^" factor)?
    unary  := ("-")? atom
    atom   := number | varname | call | "(" expr ")"
    call   := ident "(" expr ("," expr)* ")"

Builtins: mean, median, clamp (calls); min, max, pow (binary); abs, floor, ceil,
round (unary). Integer arithmetic stays exact; anything touching a float is binary64.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, FrozenSet, List, Optional, Sequence, Tuple, Union
import math
import re

from .domain import Domain, DomainSignature, Point, as_signature, make_scalar
from .errors import ArityError, DomainError, ExprSyntaxError
from .tolerance import Scalar

UNARY_OPS = frozenset({"neg", "abs", "floor", "ceil", "round"})
BINARY_OPS = frozenset({"+", "-", "*", "/", "min", "max", "pow"})
CALL_BUILTINS = frozenset({"mean", "median", "clamp"})

_BINARY_CALLS = frozenset({"min", "max", "pow"})
_UNARY_CALLS = frozenset({"abs", "floor", "ceil", "round"})
_KNOWN_CALLS = CALL_BUILTINS | _BINARY_CALLS | _UNARY_CALLS
_CALL_ARITY = {"clamp": 3}

# -- AST --------------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    index: int  # 1-based


@dataclass(frozen=True, eq=False)
class Const:
    value: Scalar

    # 2 and 2.0 are different constants: one is exact, the other binary64
    def __eq__(self, other: object) -> bool:
        return isinstance(other, Const) and type(other.value) is type(self.value) and other.value == self.value

    def __hash__(self) -> int:
        return hash((type(self.value).__name__, self.value))


@dataclass(frozen=True)
class Unary:
    op: str
    child: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple["Expr", ...]


Expr = Union[Var, Const, Unary, Binary, Call]


def variables(e: Expr) -> FrozenSet[int]:
    if isinstance(e, Var):
        return frozenset({e.index})
    if isinstance(e, Const):
        return frozenset()
    if isinstance(e, Unary):
        return variables(e.child)
    if isinstance(e, Binary):
        return variables(e.left) | variables(e.right)
    return frozenset().union(*(variables(a) for a in e.args))


def diagonal(e: Expr) -> Expr:
    """Substitute every variable by x1, turning f(x1..xn) into t -> f(t,...,t)."""

    if isinstance(e, Var):
        return Var(1)
    if isinstance(e, Const):
        return e
    if isinstance(e, Unary):
        return Unary(e.op, diagonal(e.child))
    if isinstance(e, Binary):
        return Binary(e.op, diagonal(e.left), diagonal(e.right))
    return Call(e.name, tuple(diagonal(a) for a in e.args))


# -- tokenizer --------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>\d+(?:\.\d*)?(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)
_VARNAME = re.compile(r"x(\d+)")


@dataclass(frozen=True)
class _Token:
    kind: str  # number | ident | var | op | eof
    text: str
    offset: int


def _tokenize(source: str) -> List[_Token]:
    tokens: List[_Token] = []
    pos = 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            line, col = _line_col(source, pos)
            raise ExprSyntaxError(f"unexpected character {source[pos]!r}", line, col)
        kind = m.lastgroup or ""
        if kind != "ws":
            text = m.group()
            if kind == "ident" and _VARNAME.fullmatch(text):
                kind = "var"
            tokens.append(_Token(kind, text, pos))
        pos = m.end()
    tokens.append(_Token("eof", "", len(source)))
    return tokens


def _line_col(source: str, offset: int) -> Tuple[int, int]:
    line = source.count("\n", 0, offset) + 1
    col = offset - (source.rfind("\n", 0, offset) + 1) + 1
    return line, col


# -- parser -----------------------------------------------------------------------

_ATOM_START = frozenset({"<number>", "<variable>", "<function>", "("})


class _Parser:
    def __init__(self, source: str, arity: int) -> None:
        self.source = source
        self.arity = arity
        self.tokens = _tokenize(source)
        self.pos = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def error(self, message: str, expected: FrozenSet[str] = frozenset(), tok: Optional[_Token] = None) -> ExprSyntaxError:
        t = tok or self.tok
        line, col = _line_col(self.source, t.offset)
        return ExprSyntaxError(message, line, col, expected)

    def expect(self, text: str) -> _Token:
        if self.tok.kind == "op" and self.tok.text == text:
            return self.advance()
        found = self.tok.text or "end of input"
        raise self.error(f"unexpected {found!r}", frozenset({text}))

    def at(self, *texts: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in texts

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}", frozenset({"+", "-", "*", "/", "^", "<end>"}))
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.at("+", "-"):
            op = self.advance().text
            e = Binary(op, e, self.term())
        return e

    def term(self) -> Expr:
        e = self.factor()
        while self.at("*", "/"):
            op = self.advance().text
            e = Binary(op, e, self.factor())
        return e

    def factor(self) -> Expr:
        base = self.unary()
        if self.at("^"):
            self.advance()
            return Binary("pow", base, self.factor())
        return base

    def unary(self) -> Expr:
        if self.at("-"):
            self.advance()
            if self.tok.kind == "number":
                return Const(-self.number(self.advance()))
            return Unary("neg", self.atom())
        return self.atom()

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "number":
            return Const(self.number(self.advance()))
        if t.kind == "var":
            self.advance()
            index = int(t.text[1:])
            if index < 1 or index > self.arity:
                raise ArityError(index, self.arity)
            return Var(index)
        if t.kind == "ident":
            return self.call()
        if self.at("("):
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        found = t.text or "end of input"
        raise self.error(f"unexpected {found!r}", _ATOM_START)

    def call(self) -> Expr:
        name_tok = self.advance()
        name = name_tok.text
        if name not in _KNOWN_CALLS:
            raise self.error(f"unknown function {name!r}", _KNOWN_CALLS, tok=name_tok)
        self.expect("(")
        args = [self.expr()]
        while self.at(","):
            self.advance()
            args.append(self.expr())
        self.expect(")")
        if name in _UNARY_CALLS:
            self._check_count(name_tok, name, args, 1)
            return Unary(name, args[0])
        if name in _BINARY_CALLS:
            self._check_count(name_tok, name, args, 2)
            return Binary(name, args[0], args[1])
        if name in _CALL_ARITY:
            self._check_count(name_tok, name, args, _CALL_ARITY[name])
        return Call(name, tuple(args))

    def _check_count(self, tok: _Token, name: str, args: List[Expr], count: int) -> None:
        if len(args) != count:
            raise self.error(f"{name} takes {count} argument(s), got {len(args)}", tok=tok)

    def number(self, t: _Token) -> Scalar:
        if re.fullmatch(r"\d+", t.text):
            return int(t.text)
        try:
            return make_scalar(float(t.text))
        except ValueError:
            raise self.error(f"number {t.text!r} is not finite", tok=t) from None


def parse(source: str, arity: int) -> Expr:
    """Parse `source` into an AST over variables x1..x{arity}."""

    if arity < 1:
        raise ValueError(f"arity must be >= 1, got {arity}")
    return _Parser(source, arity).parse()


# -- printer ----------------------------------------------------------------------

_INFIX = {"+": "+", "-": "-", "*": "*", "/": "/", "pow": "^"}


def format_expr(e: Expr) -> str:
    """Canonical, fully parenthesized source; parse(format_expr(e)) == e."""

    if isinstance(e, Var):
        return f"x{e.index}"
    if isinstance(e, Const):
        return str(e.value) if isinstance(e.value, int) else repr(e.value)
    if isinstance(e, Unary):
        inner = format_expr(e.child)
        if e.op != "neg":
            return f"{e.op}({inner})"
        if isinstance(e.child, Const) or (isinstance(e.child, Unary) and e.child.op == "neg"):
            return f"-({inner})"
        return f"-{inner}"
    if isinstance(e, Binary):
        left, right = format_expr(e.left), format_expr(e.right)
        if e.op in _INFIX:
            return f"({left} {_INFIX[e.op]} {right})"
        return f"{e.op}({left}, {right})"
    return f"{e.name}({', '.join(format_expr(a) for a in e.args)})"


# -- evaluation -------------------------------------------------------------------

_EXACT_POW_BITS = 4096

Compiled = Callable[[Sequence[Scalar]], Scalar]


def _real(x: float) -> float:
    if not math.isfinite(x):
        raise DomainError(f"non-finite intermediate result {x}")
    return x


def _div(a: Scalar, b: Scalar) -> Scalar:
    if b == 0:
        raise DomainError("division by zero")
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r == 0:
            return q
    return _real(a / b)


def _pow(a: Scalar, b: Scalar) -> Scalar:
    if a == 0 and b < 0:
        raise DomainError("zero raised to a negative power")
    if isinstance(a, int) and isinstance(b, int) and b >= 0:
        if abs(a) <= 1 or a.bit_length() * b <= _EXACT_POW_BITS:
            return a ** b
    result = float(a) ** float(b)
    if isinstance(result, complex):
        raise DomainError(f"{a} ^ {b} is not real")
    return _real(result)


def _add(a: Scalar, b: Scalar) -> Scalar:
    r = a + b
    return r if isinstance(r, int) else _real(r)


def _sub(a: Scalar, b: Scalar) -> Scalar:
    r = a - b
    return r if isinstance(r, int) else _real(r)


def _mul(a: Scalar, b: Scalar) -> Scalar:
    r = a * b
    return r if isinstance(r, int) else _real(r)


def _mean(values: Sequence[Scalar]) -> Scalar:
    n = len(values)
    if all(isinstance(v, int) for v in values):
        total = sum(values)
        q, r = divmod(total, n)
        if r == 0:
            return q
        return _real(total / n)
    return _real(math.fsum(values) / n)


def _median(values: Sequence[Scalar]) -> Scalar:
    s = sorted(values)
    mid = len(s) // 2
    if len(s) % 2:
        return s[mid]
    return _mean((s[mid - 1], s[mid]))


def _clamp(x: Scalar, lo: Scalar, hi: Scalar) -> Scalar:
    if lo > hi:
        raise DomainError(f"clamp bounds reversed: {lo} > {hi}")
    return min(max(x, lo), hi)


_UNARY_FN: dict = {
    "neg": lambda v: -v,
    "abs": abs,
    "floor": math.floor,
    "ceil": math.ceil,
    "round": round,
}
_BINARY_FN: dict = {
    "+": _add,
    "-": _sub,
    "*": _mul,
    "/": _div,
    "pow": _pow,
    "min": min,
    "max": max,
}


@lru_cache(maxsize=4096)
def compile_expr(e: Expr) -> Compiled:
    """Turn an AST into a closure over a positional argument sequence."""

    if isinstance(e, Var):
        i = e.index - 1
        return lambda a: a[i]
    if isinstance(e, Const):
        v = e.value
        return lambda a: v
    if isinstance(e, Unary):
        child, fn = compile_expr(e.child), _UNARY_FN[e.op]
        return lambda a: fn(child(a))
    if isinstance(e, Binary):
        left, right, fn2 = compile_expr(e.left), compile_expr(e.right), _BINARY_FN[e.op]
        return lambda a: fn2(left(a), right(a))
    n = len(e.args)
    if e.name in ("mean", "median") and e.args == tuple(Var(i + 1) for i in range(n)):
        agg = _mean if e.name == "mean" else _median
        return lambda a: agg(a[:n])
    parts = [compile_expr(arg) for arg in e.args]
    if e.name == "mean":
        return lambda a: _mean([p(a) for p in parts])
    if e.name == "median":
        return lambda a: _median([p(a) for p in parts])
    x, lo, hi = parts
    return lambda a: _clamp(x(a), lo(a), hi(a))


def evaluate(e: Expr, args: Sequence[Scalar]) -> Scalar:
    """Evaluate `e` at `args`; raises DomainError where the value is undefined."""

    try:
        return compile_expr(e)(args)
    except DomainError as exc:
        exc.point = tuple(args)
        raise
    except (ZeroDivisionError, OverflowError, ValueError) as exc:
        raise DomainError(str(exc), tuple(args)) from exc
    except IndexError:
        raise ArityError(max(variables(e)), len(args)) from None


# -- function definitions ------------------------------------------------------------


@dataclass(frozen=True)
class FunctionDef:
    """A named n-ary candidate function with its input signature.

    `codomain` is the declared B; `expected` records the known outcome
    ("holds", "fails" or "undefined") for catalog entries.
    """

    name: str
    body: Expr
    signature: DomainSignature
    codomain: Optional[Domain] = None
    expected: Optional[str] = None
    description: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        used = variables(self.body)
        if used and max(used) > self.arity:
            raise ArityError(max(used), self.arity)

    @property
    def arity(self) -> int:
        return self.signature.arity

    @property
    def source(self) -> str:
        return format_expr(self.body)

    def apply(self, point: Point) -> Scalar:
        return evaluate(self.body, point)

    def __call__(self, *args: Scalar) -> Scalar:
        return evaluate(self.body, args)

    def with_signature(self, signature: Union[str, Domain, DomainSignature], codomain: Optional[Domain] = None) -> "FunctionDef":
        sig = as_signature(signature)
        if sig.arity != self.arity:
            raise ValueError(f"{self.name} takes {self.arity} argument(s), signature {sig.label} has {sig.arity}")
        return replace(self, signature=sig, codomain=codomain)


def define(
    name: str,
    source: str,
    signature: Union[str, Domain, DomainSignature],
    codomain: Optional[Domain] = None,
    expected: Optional[str] = None,
    description: str = "",
) -> FunctionDef:
    sig = as_signature(signature)
    return FunctionDef(name, parse(source, sig.arity), sig, codomain, expected, description)


def mean_expr(n: int) -> Expr:
    return Call("mean", tuple(Var(i + 1) for i in range(n)))
