import pytest
from hypothesis import given, strategies as st

from ouroboros.domain import AllReals, IntRange, Power
from ouroboros.errors import ArityError, DomainError, ExprSyntaxError
from ouroboros.expr import (
    Binary,
    Call,
    Const,
    Unary,
    Var,
    define,
    diagonal,
    evaluate,
    format_expr,
    mean_expr,
    parse,
    variables,
)


def test_precedence_and_associativity():
    assert parse("x1 + 2 * x2", 2) == Binary("+", Var(1), Binary("*", Const(2), Var(2)))
    assert parse("x1 - x2 - 1", 2) == Binary("-", Binary("-", Var(1), Var(2)), Const(1))
    assert parse("x1 ^ 2 ^ 3", 1) == Binary("pow", Var(1), Binary("pow", Const(2), Const(3)))


def test_negative_literals_fold():
    assert parse("-3", 1) == Const(-3)
    assert parse("-x1", 1) == Unary("neg", Var(1))
    assert parse("x1 * -0.5", 1) == Binary("*", Var(1), Const(-0.5))


def test_builtins_map_to_nodes():
    assert parse("min(x1, x2)", 2) == Binary("min", Var(1), Var(2))
    assert parse("floor(x1)", 1) == Unary("floor", Var(1))
    assert parse("mean(x1, x2, x3)", 3) == mean_expr(3)
    assert parse("clamp(x1, 0, 1)", 1) == Call("clamp", (Var(1), Const(0), Const(1)))


def test_syntax_error_position():
    with pytest.raises(ExprSyntaxError) as info:
        parse("x1 +", 1)
    assert (info.value.line, info.value.column) == (1, 5)
    assert "<number>" in info.value.expected


@pytest.mark.parametrize("source", ["foo(x1)", "x1 $ 2", "(x1", "min(x1)", "clamp(x1, 0)", ""])
def test_malformed_sources(source):
    with pytest.raises(ExprSyntaxError):
        parse(source, 1)


def test_variable_outside_arity():
    with pytest.raises(ArityError) as info:
        parse("x1 + x3", 2)
    assert info.value.index == 3


def test_int_and_float_constants_differ():
    assert Const(2) != Const(2.0)
    assert parse("2", 1) != parse("2.0", 1)


def test_exact_integer_arithmetic():
    assert evaluate(parse("x1 / 2", 1), (4,)) == 2
    assert isinstance(evaluate(parse("x1 / 2", 1), (4,)), int)
    assert evaluate(parse("x1 / 2", 1), (3,)) == 1.5
    assert evaluate(parse("x1 ^ 100", 1), (3,)) == 3 ** 100


def test_mean_and_median():
    assert evaluate(mean_expr(3), (1, 2, 3)) == 2
    assert evaluate(mean_expr(3), (1, 2, 4)) == pytest.approx(7 / 3)
    assert evaluate(parse("median(x1, x2, x3, x4)", 4), (4, 1, 3, 2)) == 2.5


@pytest.mark.parametrize(
    "source,args",
    [("x1 / 0", (1,)), ("0 ^ -1", (1,)), ("x1 ^ 0.5", (-1.0,)), ("clamp(x1, 1, 0)", (0.5,)), ("x1 * x1", (1e200,))],
)
def test_undefined_evaluation(source, args):
    with pytest.raises(DomainError) as info:
        evaluate(parse(source, 1), args)
    assert info.value.point == args


def test_diagonal_and_variables():
    e = parse("x1 + x2 * x3", 3)
    assert variables(e) == {1, 2, 3}
    assert variables(diagonal(e)) == {1}
    assert evaluate(diagonal(e), (2,)) == 6


def test_printer_round_trips_examples():
    for source in ["-(2)", "-(-x1)", "x1 - -2", "min(x1, 3) ^ 2", "mean(x1, x2) / 1e-05", "-floor(x1)"]:
        e = parse(source, 2)
        assert parse(format_expr(e), 2) == e


def test_function_def():
    f = define("avg", "mean(x1, x2)", "R^2")
    assert f.arity == 2
    assert f(1, 3) == 2
    assert f.source == "mean(x1, x2)"
    g = f.with_signature(Power(IntRange(0, 9), 2))
    assert g.signature.arity == 2
    with pytest.raises(ValueError):
        f.with_signature(AllReals())
    with pytest.raises(ArityError):
        define("bad", "x2", "R")


_leaf = st.one_of(
    st.builds(Var, st.integers(1, 3)),
    st.builds(Const, st.integers(-1000, 1000)),
    st.builds(Const, st.floats(-1e6, 1e6, allow_nan=False)),
)


def _extend(children):
    return st.one_of(
        st.builds(Unary, st.sampled_from(["neg", "abs", "floor", "ceil", "round"]), children),
        st.builds(Binary, st.sampled_from(["+", "-", "*", "/", "min", "max", "pow"]), children, children),
        st.builds(lambda a, b: Call("mean", (a, b)), children, children),
        st.builds(lambda a, b, c: Call("clamp", (a, b, c)), children, children, children),
    )


@given(st.recursive(_leaf, _extend, max_leaves=12))
def test_printer_is_inverse_of_parser(e):
    assert parse(format_expr(e), 3) == e
