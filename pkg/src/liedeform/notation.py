"""Parse the ``psi^{13}_2`` style notation used in reports and fixtures."""

from __future__ import annotations

import ast
import operator
import re
from fractions import Fraction

from .coder import Coderivation
from .errors import ParseError
from .scalars import PolyRing, RatFun, param, parse_rational

_TERM = re.compile(
    r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?(phi|psi)\^\{([\d,]*)\}_(\d+)\s*"
)


def parse_coderivation(text: str, dim: int) -> Coderivation:
    """``"2*phi^{1}_1 + phi^{2}_1"`` -> Coderivation; all terms share one arity."""
    pos = 0
    terms = {}
    arity = None
    text = text.strip()
    if not text:
        raise ParseError("empty coderivation")
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot parse {text[pos:]!r}")
        sign, coeff, sym, word, target = m.groups()
        if pos and not sign:
            raise ParseError(f"missing operator before {text[pos:]!r}")
        w = tuple(int(c) for c in (word.split(",") if "," in word else word)) if word else ()
        if arity is None:
            arity = len(w)
        elif arity != len(w):
            raise ParseError("mixed arities in one coderivation")
        if (sym == "psi") != (arity % 2 == 0):
            raise ParseError(f"{sym} used for arity {arity}")
        c = parse_rational(coeff) if coeff else Fraction(1)
        if sign == "-":
            c = -c
        key = (w, int(target))
        terms[key] = terms.get(key, 0) + c
        pos = m.end()
    return Coderivation.from_terms(dim, arity, terms)


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def parse_ratfun(text: str, ring: PolyRing) -> RatFun:
    """Parse ``"-t1*t4^2/t3^2"`` into a RatFun over ``ring``."""
    try:
        tree = ast.parse(str(text).replace("^", "**").replace("−", "-"), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse expression {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return RatFun(node.value, ring=ring)
        if isinstance(node, ast.Name):
            name = param(node.id)
            if name not in ring:
                raise ParseError(f"unknown parameter {node.id!r}")
            return RatFun(ring.gen(name), ring=ring)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise ParseError("exponents must be integer literals")
                return ev(node.left) ** node.right.value
            if type(node.op) in _BINOPS:
                return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        raise ParseError(f"unsupported syntax in {text!r}")

    return ev(tree)
