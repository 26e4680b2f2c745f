"""Restricted arithmetic expressions for custom schedules.

Only numbers, the variables passed in, ``+ - * / **``, unary signs and the
functions in ``FUNCTIONS`` are accepted.
"""

import ast
import math
import operator

FUNCTIONS = {"sqrt": math.sqrt, "log": math.log, "log10": math.log10, "exp": math.exp}
CONSTANTS = {"e": math.e, "pi": math.pi}

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_UNARY = {ast.UAdd: operator.pos, ast.USub: operator.neg}


class ExprError(ValueError):
    pass


def compile_expr(text, variables):
    """Parse ``text`` and return it as a checked AST; raises :class:`ExprError`."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ExprError(f"cannot parse expression {text!r}: {exc.msg}") from None
    allowed = set(variables) | set(CONSTANTS)
    for node in ast.walk(tree):
        if isinstance(node, (ast.Expression, ast.Load)) or type(node) in _BINOPS or type(node) in _UNARY:
            continue
        if isinstance(node, (ast.BinOp, ast.UnaryOp)):
            if isinstance(node, ast.BinOp) and type(node.op) not in _BINOPS:
                raise ExprError(f"operator not allowed in {text!r}")
            if isinstance(node, ast.UnaryOp) and type(node.op) not in _UNARY:
                raise ExprError(f"operator not allowed in {text!r}")
            continue
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            continue
        if isinstance(node, ast.Name):
            if node.id not in allowed and node.id not in FUNCTIONS:
                raise ExprError(f"unknown name {node.id!r} in {text!r}")
            continue
        if isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in FUNCTIONS or node.keywords or len(node.args) != 1:
                raise ExprError(f"only single-argument calls to {sorted(FUNCTIONS)} are allowed in {text!r}")
            continue
        raise ExprError(f"unsupported syntax {type(node).__name__} in {text!r}")
    return tree


def evaluate(tree, **values):
    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant):
            return float(node.value)
        if isinstance(node, ast.Name):
            if node.id in values:
                return float(values[node.id])
            return CONSTANTS[node.id]
        if isinstance(node, ast.BinOp):
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp):
            return _UNARY[type(node.op)](ev(node.operand))
        if isinstance(node, ast.Call):
            return FUNCTIONS[node.func.id](ev(node.args[0]))
        raise ExprError(f"unsupported node {type(node).__name__}")

    try:
        return ev(tree)
    except (ArithmeticError, ValueError) as exc:
        raise ExprError(f"expression evaluation failed: {exc}") from None


def uses(tree, name):
    return any(isinstance(node, ast.Name) and node.id == name for node in ast.walk(tree))
