"""Closed grammar for symbol expressions such as ``sin(x) + 2`` or ``exp(-x^2)``.

Identifiers: ``x`` only. Operators: + - * / ^ (``^`` is power). Functions:
sin, cos, exp. Numeric literals. Nothing else parses, so scenario files
cannot execute code.
"""
from __future__ import annotations

import ast
import operator

import numpy as np

from .errors import ParseError

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_UNARY = {ast.USub: operator.neg, ast.UAdd: operator.pos}
_FUNCS = {"sin": np.sin, "cos": np.cos, "exp": np.exp}


def _check(node: ast.AST, text: str) -> None:
    if isinstance(node, ast.Expression):
        _check(node.body, text)
    elif isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        _check(node.left, text)
        _check(node.right, text)
    elif isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
        _check(node.operand, text)
    elif isinstance(node, ast.Constant) and type(node.value) in (int, float):
        pass
    elif isinstance(node, ast.Name) and node.id == "x":
        pass
    elif (
        isinstance(node, ast.Call)
        and isinstance(node.func, ast.Name)
        and node.func.id in _FUNCS
        and len(node.args) == 1
        and not node.keywords
    ):
        _check(node.args[0], text)
    else:
        raise ParseError(f"symbol {text!r}: disallowed construct {ast.dump(node)[:60]}")


def parse_symbol(text: str) -> ast.Expression:
    if not isinstance(text, str) or not text.strip():
        raise ParseError("symbol must be a non-empty string")
    if "**" in text:
        raise ParseError(f"symbol {text!r}: use '^' for powers")
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"symbol {text!r}: {exc.msg}") from None
    _check(tree, text)
    return tree


def _eval(node: ast.AST, x: np.ndarray):
    if isinstance(node, ast.Expression):
        return _eval(node.body, x)
    if isinstance(node, ast.BinOp):
        return _BINOPS[type(node.op)](_eval(node.left, x), _eval(node.right, x))
    if isinstance(node, ast.UnaryOp):
        return _UNARY[type(node.op)](_eval(node.operand, x))
    if isinstance(node, ast.Constant):
        return float(node.value)
    if isinstance(node, ast.Name):
        return x
    return _FUNCS[node.func.id](_eval(node.args[0], x))


def evaluate_symbol(text_or_tree, x) -> np.ndarray:
    tree = parse_symbol(text_or_tree) if isinstance(text_or_tree, str) else text_or_tree
    x = np.asarray(x, dtype=float)
    with np.errstate(all="ignore"):
        out = np.broadcast_to(np.asarray(_eval(tree, x), dtype=float), x.shape).copy()
    return out
