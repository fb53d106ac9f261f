"""Evaluate the compact element notation used in membership claims.

Names with a digit suffix are expanded over single-digit variable numbers:

* ``y134`` is ``y1*y3*y4``;
* ``x12`` is ``x1*x2 = (1 + y1)(1 + y2)``;
* ``z12`` is ``x1*x2 - 1``, the first Chern class of that line bundle.

Anything else (``u``, ``v``, ``zp``, ...) must be supplied as a binding.
Only integer literals, names, ``+ - *`` and powers with a literal
non-negative exponent are accepted; ``^`` is read as a power.
"""

from __future__ import annotations

import ast
import re
from typing import Mapping

from .truncring import RingSpec, TruncPoly

_INDEXED = re.compile(r"^([xyz])(\d+)$")


class UnresolvedShorthand(ValueError):
    """The expression uses a name or construct with no meaning in the ring."""


def _variables(spec: RingSpec, digits: str, name: str) -> list[int]:
    out = []
    for ch in digits:
        i = int(ch) - 1
        if not 0 <= i < spec.n:
            raise UnresolvedShorthand(f"{name}: variable {ch} out of range for {spec.n} variables")
        out.append(i)
    return out


def resolve_name(name: str, spec: RingSpec, bindings: Mapping[str, TruncPoly] | None = None) -> TruncPoly:
    if bindings and name in bindings:
        value = bindings[name]
        if value.spec != spec:
            raise UnresolvedShorthand(f"binding {name} lives in another ring")
        return value
    m = _INDEXED.match(name)
    if not m:
        raise UnresolvedShorthand(f"unknown name {name!r}")
    kind, digits = m.groups()
    result = spec.one()
    for i in _variables(spec, digits, name):
        y = spec.variable(i)
        result = result * (y if kind == "y" else y + 1)
    return result - 1 if kind == "z" else result


def evaluate(expr: str, spec: RingSpec, bindings: Mapping[str, TruncPoly] | None = None) -> TruncPoly:
    """Parse ``expr`` and evaluate it in the truncated ring ``spec``."""
    try:
        tree = ast.parse(expr.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise UnresolvedShorthand(f"cannot parse {expr!r}: {exc.msg}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return TruncPoly.constant(spec, node.value)
        if isinstance(node, ast.Name):
            return resolve_name(node.id, spec, bindings)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            val = ev(node.operand)
            return -val if isinstance(node.op, ast.USub) else val
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and type(node.right.value) is int
                        and node.right.value >= 0):
                    raise UnresolvedShorthand("exponents must be non-negative integer literals")
                return ev(node.left) ** node.right.value
            ops = {ast.Add: lambda a, b: a + b, ast.Sub: lambda a, b: a - b,
                   ast.Mult: lambda a, b: a * b}
            op = ops.get(type(node.op))
            if op is not None:
                return op(ev(node.left), ev(node.right))
        raise UnresolvedShorthand(f"unsupported construct {ast.dump(node)[:40]} in {expr!r}")

    return ev(tree)
