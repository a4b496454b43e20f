"""Local rewriting, simplification and exact differentiation."""
from __future__ import annotations

import math
from functools import reduce
from typing import Iterable

from ..errors import EvaluationError
from .expr import ONE, TWO, ZERO, BinOp, Const, Expr, Func, Neg, Param, Var, as_expr, depends_on, evaluate


def _is_const(e: Expr, value: float | None = None) -> bool:
    return isinstance(e, Const) and (value is None or e.value == value)


def _fold(node: Expr) -> Expr:
    try:
        value = evaluate(node, {})
    except EvaluationError:
        return node
    if not math.isfinite(value):
        return node
    return Const(value)


def neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return Const(-a.value) if a.value != 0.0 else ZERO
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def add(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return _fold(BinOp("+", a, b))
    if _is_const(a, 0.0):
        return b
    if _is_const(b, 0.0):
        return a
    if isinstance(b, Neg):
        return sub(a, b.arg)
    if isinstance(a, Neg):
        return sub(b, a.arg)
    return BinOp("+", a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return _fold(BinOp("-", a, b))
    if _is_const(b, 0.0):
        return a
    if _is_const(a, 0.0):
        return neg(b)
    if a == b:
        return ZERO
    if isinstance(b, Neg):
        return add(a, b.arg)
    return BinOp("-", a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return _fold(BinOp("*", a, b))
    if _is_const(a, 0.0) or _is_const(b, 0.0):
        return ZERO
    if _is_const(a, 1.0):
        return b
    if _is_const(b, 1.0):
        return a
    if _is_const(a, -1.0):
        return neg(b)
    if _is_const(b, -1.0):
        return neg(a)
    if isinstance(a, Neg):
        return neg(mul(a.arg, b))
    if isinstance(b, Neg):
        return neg(mul(a, b.arg))
    if isinstance(b, Const) and not isinstance(a, Const):
        a, b = b, a
    if isinstance(a, Const) and isinstance(b, BinOp) and b.op == "*" and isinstance(b.left, Const):
        return mul(_fold(BinOp("*", a, b.left)), b.right)
    return BinOp("*", a, b)


def div(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return _fold(BinOp("/", a, b))
    if _is_const(a, 0.0):
        return ZERO
    if _is_const(b, 1.0):
        return a
    if _is_const(b, -1.0):
        return neg(a)
    if a == b:
        return ONE
    if isinstance(a, Neg):
        return neg(div(a.arg, b))
    if isinstance(b, Neg):
        return neg(div(a, b.arg))
    return BinOp("/", a, b)


def power(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return _fold(BinOp("^", a, b))
    if _is_const(b, 1.0):
        return a
    if _is_const(b, 0.0):
        return ONE
    if _is_const(a, 1.0):
        return ONE
    return BinOp("^", a, b)


def func(name: str, a: Expr) -> Expr:
    node = Func(name, a)
    if isinstance(a, Const):
        return _fold(node)
    return node


_BUILD = {"+": add, "-": sub, "*": mul, "/": div, "^": power}


def build(op: str, a, b) -> Expr:
    """Combine two operands with ``op`` applying the local rewrite rules."""
    return _BUILD[op](as_expr(a), as_expr(b))


def add_all(terms: Iterable[Expr]) -> Expr:
    return reduce(add, (as_expr(t) for t in terms), ZERO)


def mul_all(factors: Iterable[Expr]) -> Expr:
    return reduce(mul, (as_expr(f) for f in factors), ONE)


def simplify(e: Expr) -> Expr:
    """Bottom-up constant folding and identity removal.

    The result agrees numerically with ``e`` wherever both are defined;
    it may be defined at more points (``0*log(r)`` becomes ``0``).
    """
    if isinstance(e, (Const, Var, Param)):
        return e
    if isinstance(e, Neg):
        return neg(simplify(e.arg))
    if isinstance(e, Func):
        return func(e.name, simplify(e.arg))
    return _BUILD[e.op](simplify(e.left), simplify(e.right))


def _dfunc(name: str, u: Expr) -> Expr:
    """Derivative of ``name`` evaluated at ``u`` (outer factor only)."""
    if name == "sin":
        return func("cos", u)
    if name == "cos":
        return neg(func("sin", u))
    if name == "sinh":
        return func("cosh", u)
    if name == "cosh":
        return func("sinh", u)
    if name == "exp":
        return func("exp", u)
    if name == "log":
        return div(ONE, u)
    if name == "sqrt":
        return div(ONE, mul(TWO, func("sqrt", u)))
    if name == "abs":
        # sign(0) = 0 fixes the derivative of abs at the kink
        return func("sign", u)
    if name == "sign":
        return ZERO
    raise ValueError(f"unknown function {name!r}")


def differentiate(e: Expr, var: str) -> Expr:
    """Exact partial derivative of ``e`` with respect to coordinate ``var``."""
    if isinstance(e, (Const, Param)):
        return ZERO
    if isinstance(e, Var):
        return ONE if e.name == var else ZERO
    if isinstance(e, Neg):
        return neg(differentiate(e.arg, var))
    if isinstance(e, Func):
        du = differentiate(e.arg, var)
        if _is_const(du, 0.0):
            return ZERO
        return mul(_dfunc(e.name, simplify(e.arg)), du)
    u, v = simplify(e.left), simplify(e.right)
    op = e.op
    if op in "+-":
        return build(op, differentiate(u, var), differentiate(v, var))
    du = differentiate(u, var)
    dv = differentiate(v, var)
    if op == "*":
        return add(mul(du, v), mul(u, dv))
    if op == "/":
        if _is_const(dv, 0.0):
            return div(du, v)
        if _is_const(du, 0.0):
            return neg(div(mul(u, dv), power(v, TWO)))
        return div(sub(mul(du, v), mul(u, dv)), power(v, TWO))
    # power
    if not depends_on(v, var):
        if _is_const(du, 0.0):
            return ZERO
        return mul(mul(v, power(u, sub(v, ONE))), du)
    if not depends_on(u, var):
        return mul(mul(power(u, v), func("log", u)), dv)
    return mul(power(u, v), add(mul(dv, func("log", u)), div(mul(v, du), u)))
