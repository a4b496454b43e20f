"""Scalar expression language used to write metric components."""
from .calculus import add, add_all, build, differentiate, div, func, mul, mul_all, neg, power, simplify, sub
from .expr import (
    FUNCTIONS,
    ONE,
    ZERO,
    BinOp,
    CompiledArray,
    Const,
    Expr,
    Func,
    Neg,
    Param,
    Var,
    as_expr,
    compile_exprs,
    depends_on,
    evaluate,
    free_names,
    to_text,
)
from .metric import MetricSpec, parse_metric_file
from .parser import parse_expression, tokenize

__all__ = [
    "FUNCTIONS", "ONE", "ZERO", "BinOp", "CompiledArray", "Const", "Expr", "Func",
    "MetricSpec", "Neg", "Param", "Var", "add", "add_all", "as_expr", "build",
    "compile_exprs", "depends_on", "differentiate", "div", "evaluate", "free_names",
    "func", "mul", "mul_all", "neg", "parse_expression", "parse_metric_file",
    "power", "simplify", "sub", "to_text", "tokenize",
]
