"""Expression trees: node types, printing, evaluation and compilation.

Nodes are immutable and compare structurally, so two trees are equal
exactly when they print the same way.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from ..errors import EvaluationError

FUNCTIONS = ("sin", "cos", "sinh", "cosh", "exp", "log", "sqrt", "abs", "sign")
BINARY_OPS = ("+", "-", "*", "/", "^")

# printing precedence
_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4, "atom": 5}


@dataclass(frozen=True, eq=True)
class Expr:
    _hash: int = field(init=False, repr=False, compare=False, default=0)

    def __hash__(self):
        h = self._hash
        if not h:
            h = hash(self._key())
            object.__setattr__(self, "_hash", h)
        return h

    def _key(self):
        raise NotImplementedError

    def __str__(self):
        return to_text(self)

    # operator sugar; no simplification happens here
    def __add__(self, other):
        return BinOp("+", self, as_expr(other))

    def __radd__(self, other):
        return BinOp("+", as_expr(other), self)

    def __sub__(self, other):
        return BinOp("-", self, as_expr(other))

    def __rsub__(self, other):
        return BinOp("-", as_expr(other), self)

    def __mul__(self, other):
        return BinOp("*", self, as_expr(other))

    def __rmul__(self, other):
        return BinOp("*", as_expr(other), self)

    def __truediv__(self, other):
        return BinOp("/", self, as_expr(other))

    def __rtruediv__(self, other):
        return BinOp("/", as_expr(other), self)

    def __pow__(self, other):
        return BinOp("^", self, as_expr(other))

    def __neg__(self):
        return Neg(self)


@dataclass(frozen=True, eq=True, repr=False)
class Const(Expr):
    value: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))

    def _key(self):
        return ("c", self.value)

    def __repr__(self):
        return f"Const({self.value!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Var(Expr):
    name: str = ""

    def _key(self):
        return ("v", self.name)

    def __repr__(self):
        return f"Var({self.name!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Param(Expr):
    name: str = ""

    def _key(self):
        return ("p", self.name)

    def __repr__(self):
        return f"Param({self.name!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Neg(Expr):
    arg: Expr = None

    def _key(self):
        return ("neg", hash(self.arg))

    def __repr__(self):
        return f"Neg({self.arg!r})"


@dataclass(frozen=True, eq=True, repr=False)
class BinOp(Expr):
    op: str = "+"
    left: Expr = None
    right: Expr = None

    def _key(self):
        return ("bin", self.op, hash(self.left), hash(self.right))

    def __repr__(self):
        return f"BinOp({self.op!r}, {self.left!r}, {self.right!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Func(Expr):
    name: str = "sin"
    arg: Expr = None

    def _key(self):
        return ("fn", self.name, hash(self.arg))

    def __repr__(self):
        return f"Func({self.name!r}, {self.arg!r})"


ZERO = Const(0.0)
ONE = Const(1.0)
TWO = Const(2.0)


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, float, np.floating, np.integer)):
        return Const(float(x))
    raise TypeError(f"cannot convert {type(x).__name__} to an expression")


def free_names(e: Expr) -> tuple[set[str], set[str]]:
    """Return the (variables, parameters) referenced by ``e``."""
    variables: set[str] = set()
    params: set[str] = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            variables.add(node.name)
        elif isinstance(node, Param):
            params.add(node.name)
        elif isinstance(node, (Neg, Func)):
            stack.append(node.arg)
        elif isinstance(node, BinOp):
            stack.append(node.left)
            stack.append(node.right)
    return variables, params


def depends_on(e: Expr, var: str) -> bool:
    return var in free_names(e)[0]


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return _PREC["neg"]
    if isinstance(e, Const) and (e.value < 0 or math.copysign(1.0, e.value) < 0):
        return _PREC["neg"]
    return _PREC["atom"]


def _fmt_const(value: float) -> str:
    if not math.isfinite(value):
        raise ValueError(f"non-finite constant {value!r} cannot be printed")
    if value.is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def _render(e: Expr, pow_op: str, fn_prefix: str, name_of: Callable[[Expr], str]) -> str:
    if isinstance(e, Const):
        text = _fmt_const(e.value)
        return text
    if isinstance(e, (Var, Param)):
        return name_of(e)
    if isinstance(e, Func):
        return f"{fn_prefix}{e.name}({_render(e.arg, pow_op, fn_prefix, name_of)})"
    if isinstance(e, Neg):
        inner = _render(e.arg, pow_op, fn_prefix, name_of)
        if _prec(e.arg) < _PREC["neg"]:
            inner = f"({inner})"
        return f"-{inner}"
    assert isinstance(e, BinOp)
    p = _PREC[e.op]
    left = _render(e.left, pow_op, fn_prefix, name_of)
    right = _render(e.right, pow_op, fn_prefix, name_of)
    if e.op == "^":
        # base is an atom; exponent is a unary-level expression
        if _prec(e.left) <= p:
            left = f"({left})"
        if _prec(e.right) < _PREC["neg"]:
            right = f"({right})"
        return f"{left}{pow_op}{right}"
    if _prec(e.left) < p:
        left = f"({left})"
    if _prec(e.right) <= p:
        right = f"({right})"
    return f"{left} {e.op} {right}"


def to_text(e: Expr) -> str:
    """Print ``e`` in the input grammar with the fewest parentheses that
    still reparse to the identical tree."""
    return _render(e, "^", "", lambda n: n.name)


# ---------------------------------------------------------------- evaluation

def _apply_func(name: str, x: float, node: Expr) -> float:
    try:
        if name == "log":
            if x <= 0.0:
                raise EvaluationError("domain", node, f"log of non-positive value {x!r}")
            return math.log(x)
        if name == "sqrt":
            if x < 0.0:
                raise EvaluationError("domain", node, f"sqrt of negative value {x!r}")
            return math.sqrt(x)
        if name == "abs":
            return abs(x)
        if name == "sign":
            return _sign(x)
        return getattr(math, name)(x)
    except OverflowError:
        raise EvaluationError("overflow", node, f"{name} overflows") from None


def _sign(x: float) -> float:
    if x > 0.0:
        return 1.0
    if x < 0.0:
        return -1.0
    return 0.0


def _power(a: float, b: float, node: Expr) -> float:
    if a == 0.0 and b < 0.0:
        raise EvaluationError("domain", node, "zero raised to a negative power")
    if a < 0.0 and not float(b).is_integer():
        raise EvaluationError("domain", node, "negative base with non-integer exponent")
    try:
        return math.pow(a, b)
    except OverflowError:
        raise EvaluationError("overflow", node, "power overflows") from None


def evaluate(e: Expr, env: Mapping[str, float]) -> float:
    """Evaluate ``e`` in IEEE double precision.

    ``env`` binds coordinate and parameter names alike.
    """
    if isinstance(e, Const):
        return e.value
    if isinstance(e, (Var, Param)):
        try:
            return float(env[e.name])
        except KeyError:
            raise EvaluationError("unbound", e, f"name {e.name!r} is not bound") from None
    if isinstance(e, Neg):
        return -evaluate(e.arg, env)
    if isinstance(e, Func):
        return _apply_func(e.name, evaluate(e.arg, env), e)
    a = evaluate(e.left, env)
    b = evaluate(e.right, env)
    op = e.op
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if b == 0.0:
            raise EvaluationError("division-by-zero", e, "division by zero")
        return a / b
    return _power(a, b, e)


# ---------------------------------------------------------------- compilation

def _compiled_pow(a, b):
    if a < 0.0 and not float(b).is_integer():
        raise ValueError("negative base with non-integer exponent")
    return math.pow(a, b)


def _compiled_log(x):
    return math.log(x)


_NAMESPACE = {
    "_sin": math.sin,
    "_cos": math.cos,
    "_sinh": math.sinh,
    "_cosh": math.cosh,
    "_exp": math.exp,
    "_log": _compiled_log,
    "_sqrt": math.sqrt,
    "_abs": abs,
    "_sign": _sign,
    "_pow": _compiled_pow,
}


def _to_python(e: Expr, slot: Mapping[str, int]) -> str:
    # ^ is emitted as a call so the math.pow domain checks apply
    if isinstance(e, Const):
        return f"({e.value!r})"
    if isinstance(e, (Var, Param)):
        return f"_a{slot[e.name]}"
    if isinstance(e, Func):
        return f"_{e.name}({_to_python(e.arg, slot)})"
    if isinstance(e, Neg):
        return f"(-{_to_python(e.arg, slot)})"
    left = _to_python(e.left, slot)
    right = _to_python(e.right, slot)
    if e.op == "^":
        return f"_pow({left}, {right})"
    return f"({left} {e.op} {right})"


class CompiledArray:
    """A batch of expressions compiled into one Python function.

    Calling it with a mapping of name to value returns a float64 array of
    the requested shape. Arithmetic faults are re-diagnosed with the
    tree-walking evaluator so the error names the failing subexpression.
    """

    def __init__(self, exprs: Sequence[Expr], names: Sequence[str], shape=None):
        self.exprs = tuple(exprs)
        self.names = tuple(names)
        self.shape = tuple(shape) if shape is not None else (len(self.exprs),)
        slot = {n: i for i, n in enumerate(self.names)}
        for ex in self.exprs:
            vs, ps = free_names(ex)
            missing = (vs | ps) - set(slot)
            if missing:
                raise EvaluationError(
                    "unbound", ex, f"names {sorted(missing)} are not declared"
                )
        args = ", ".join(f"_a{i}" for i in range(len(self.names)))
        body = ", ".join(_to_python(ex, slot) for ex in self.exprs)
        src = f"def _compiled({args}):\n    return ({body}{',' if len(self.exprs) == 1 else ''})\n"
        ns = dict(_NAMESPACE)
        exec(compile(src, "<degengr-expr>", "exec"), ns)
        self._fn = ns["_compiled"]

    def __call__(self, env: Mapping[str, float]) -> np.ndarray:
        try:
            values = [float(env[n]) for n in self.names]
        except KeyError as exc:
            name = exc.args[0]
            raise EvaluationError("unbound", Var(name), f"name {name!r} is not bound") from None
        try:
            out = self._fn(*values)
        except (ArithmeticError, ValueError):
            for ex in self.exprs:
                evaluate(ex, env)
            raise
        return np.array(out, dtype=float).reshape(self.shape)


def compile_exprs(exprs: Iterable[Expr], names: Sequence[str], shape=None) -> CompiledArray:
    return CompiledArray(list(exprs), names, shape)
