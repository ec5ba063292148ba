"""Symbolic directions such as ``"L/2 : h + L/2"``.

Expressions are arithmetic over rationals and the symbols ``w``, ``h``, ``t``
and ``L`` (the eigenvalue lambda).  They are parsed with `ast` and evaluated
exactly; nothing is passed to `eval`.
"""

from __future__ import annotations

import ast
from fractions import Fraction

from ..exactnum import QuadNum
from ..prototypes import Prototype, lam
from .surface import Vec

SYMBOLS = ("w", "h", "t", "L")


class DirectionSyntaxError(ValueError):
    pass


_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
}


def _eval(node: ast.AST, env: dict[str, QuadNum], D: int) -> QuadNum:
    if isinstance(node, ast.Expression):
        return _eval(node.body, env, D)
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return QuadNum(node.value, 0, D)
    if isinstance(node, ast.Name):
        if node.id not in env:
            raise DirectionSyntaxError(f"unknown symbol {node.id!r}; allowed: {', '.join(SYMBOLS)}")
        return env[node.id]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand, env, D)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        left, right = _eval(node.left, env, D), _eval(node.right, env, D)
        if isinstance(node.op, ast.Div) and not right:
            raise DirectionSyntaxError("division by zero in direction")
        return _BINOPS[type(node.op)](left, right)
    raise DirectionSyntaxError(f"unsupported syntax in direction: {ast.dump(node)[:60]}")


def evaluate(expr: str, proto: Prototype) -> QuadNum:
    """Exact value of one coordinate expression for the given prototype."""
    text = expr.strip().replace("λ", "L").replace("−", "-")
    if not text:
        raise DirectionSyntaxError("empty expression")
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise DirectionSyntaxError(f"cannot parse {expr!r}: {exc.msg}") from None
    D = proto.disc
    env = {
        "w": QuadNum(proto.w, 0, D),
        "h": QuadNum(proto.h, 0, D),
        "t": QuadNum(proto.t, 0, D),
        "L": lam(proto),
    }
    return _eval(tree, env, D)


def parse_direction(text: str, proto: Prototype) -> Vec:
    """Parse ``"X : Y"`` into an exact vector; the zero vector is rejected."""
    parts = text.split(":")
    if len(parts) != 2:
        raise DirectionSyntaxError(f"direction {text!r} must have the form 'EXPR:EXPR'")
    v = (evaluate(parts[0], proto), evaluate(parts[1], proto))
    if not v[0] and not v[1]:
        raise DirectionSyntaxError("direction must be nonzero")
    return v


def rational(x: QuadNum) -> Fraction:
    return x.to_fraction()
