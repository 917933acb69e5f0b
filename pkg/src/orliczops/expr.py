"""A small formula language for config files.

Formulas are arithmetic over the variables ``n`` (atom index) and ``x``
(atom point or continuum coordinate) with ``exp``, ``log``, ``sqrt``,
``abs``, ``min``, ``max`` and the constants ``pi`` and ``e``.  ``^`` is read
as a power.  Parsing goes through :mod:`ast` and only whitelisted nodes are
compiled, so config text never reaches ``eval``.
"""

from __future__ import annotations

import ast
import math
import operator

import numpy as np

VARIABLES = ("n", "x")

_FUNCS = {
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
    "min": np.minimum,
    "max": np.maximum,
}
_CONSTS = {"pi": math.pi, "e": math.e}
_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_UNARY = {ast.USub: operator.neg, ast.UAdd: operator.pos}


class FormulaError(ValueError):
    """Raised for text outside the formula grammar; ``col`` is 1-based."""

    def __init__(self, message: str, col: int | None = None):
        super().__init__(message)
        self.col = col


class Formula:
    """A compiled formula; call it with keyword arrays for the variables it uses."""

    def __init__(self, text: str):
        self.text = text
        source = text.replace("^", "**")
        try:
            tree = ast.parse(source, mode="eval")
        except SyntaxError as exc:
            raise FormulaError(f"malformed formula {text!r}: {exc.msg}", exc.offset) from None
        self.variables = set()
        self._fn = self._compile(tree.body)

    def _compile(self, node):
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            value = float(node.value)
            return lambda env: value
        if isinstance(node, ast.Name):
            if node.id in VARIABLES:
                self.variables.add(node.id)
                name = node.id
                return lambda env: env[name]
            if node.id in _CONSTS:
                value = _CONSTS[node.id]
                return lambda env: value
            raise FormulaError(f"unknown name {node.id!r} in {self.text!r}", node.col_offset + 1)
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            op, left, right = _BINOPS[type(node.op)], self._compile(node.left), self._compile(node.right)
            return lambda env: op(left(env), right(env))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            op, inner = _UNARY[type(node.op)], self._compile(node.operand)
            return lambda env: op(inner(env))
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords:
            fn = _FUNCS.get(node.func.id)
            if fn is None:
                raise FormulaError(f"unknown function {node.func.id!r} in {self.text!r}", node.col_offset + 1)
            args = [self._compile(a) for a in node.args]
            if len(args) != (2 if node.func.id in ("min", "max") else 1):
                raise FormulaError(f"wrong number of arguments to {node.func.id} in {self.text!r}", node.col_offset + 1)
            return lambda env: fn(*(a(env) for a in args))
        raise FormulaError(f"unsupported syntax in {self.text!r}", getattr(node, "col_offset", 0) + 1)

    def __call__(self, **env):
        missing = self.variables - env.keys()
        if missing:
            raise FormulaError(f"formula {self.text!r} needs {sorted(missing)}")
        arrays = {k: np.asarray(v, dtype=float) for k, v in env.items()}
        shape = np.broadcast_shapes(*(a.shape for a in arrays.values())) if arrays else ()
        with np.errstate(all="ignore"):
            out = self._fn(arrays)
        return np.broadcast_to(np.asarray(out, dtype=float), shape).copy() if shape else float(out)

    def __repr__(self):
        return f"Formula({self.text!r})"


def compile_formula(text) -> Formula:
    """Compile ``text``; numbers are accepted as constant formulas."""
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        return Formula(repr(float(text)))
    if not isinstance(text, str):
        raise FormulaError(f"expected a formula string, got {type(text).__name__}")
    return Formula(text)
