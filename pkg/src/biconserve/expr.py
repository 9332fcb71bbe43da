"""Closed expression trees over chart parameters, with jet evaluation.

Supported operations: + - * /, power with a real literal exponent, sin, cos,
sinh, cosh, exp, sqrt, negation, and calls to named profile functions that
supply their own derivative ladders.  Trees are frozen dataclasses so charts
stay immutable and picklable for worker pools.

Text syntax (used by the CLI):

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom (('^' | '**') signed_number)?
    atom   := number | name | name '(' expr ')' | '(' expr ')'

Variable names come from the chart (s, t, u, v for four parameters); any
other call name is looked up in the profile bank, e.g. ``phi(s)*cos(v)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, DomainError
from .jets import Jet, JetSpace
from .jets import jet as _jetops


class Expr:
    """Base class; concrete nodes are frozen dataclasses below."""

    def __add__(self, other):
        return Add(self, _as_expr(other))

    def __radd__(self, other):
        return Add(_as_expr(other), self)

    def __sub__(self, other):
        return Sub(self, _as_expr(other))

    def __rsub__(self, other):
        return Sub(_as_expr(other), self)

    def __mul__(self, other):
        return Mul(self, _as_expr(other))

    def __rmul__(self, other):
        return Mul(_as_expr(other), self)

    def __truediv__(self, other):
        return Div(self, _as_expr(other))

    def __rtruediv__(self, other):
        return Div(_as_expr(other), self)

    def __neg__(self):
        return Neg(self)

    def __pow__(self, p):
        return Pow(self, float(p))


def _as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    return Const(float(x))


@dataclass(frozen=True)
class Const(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    index: int
    name: str = ""


@dataclass(frozen=True)
class Add(Expr):
    a: Expr
    b: Expr


@dataclass(frozen=True)
class Sub(Expr):
    a: Expr
    b: Expr


@dataclass(frozen=True)
class Mul(Expr):
    a: Expr
    b: Expr


@dataclass(frozen=True)
class Div(Expr):
    a: Expr
    b: Expr


@dataclass(frozen=True)
class Neg(Expr):
    a: Expr


@dataclass(frozen=True)
class Pow(Expr):
    a: Expr
    exponent: float


@dataclass(frozen=True)
class Call(Expr):
    fn: str  # sin cos sinh cosh exp sqrt
    a: Expr


@dataclass(frozen=True)
class ProfileCall(Expr):
    name: str
    a: Expr


_UNARY = {
    "sin": _jetops.sin,
    "cos": _jetops.cos,
    "sinh": _jetops.sinh,
    "cosh": _jetops.cosh,
    "exp": _jetops.exp,
    "sqrt": _jetops.sqrt,
}


def _eval(node: Expr, vars_: list[Jet], bank, memo: dict) -> Jet:
    key = id(node)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if isinstance(node, Const):
        out = node.value  # scalars mix freely with jets
    elif isinstance(node, Var):
        out = vars_[node.index]
    elif isinstance(node, Add):
        out = _eval(node.a, vars_, bank, memo) + _eval(node.b, vars_, bank, memo)
    elif isinstance(node, Sub):
        out = _eval(node.a, vars_, bank, memo) - _eval(node.b, vars_, bank, memo)
    elif isinstance(node, Mul):
        out = _eval(node.a, vars_, bank, memo) * _eval(node.b, vars_, bank, memo)
    elif isinstance(node, Div):
        den = _eval(node.b, vars_, bank, memo)
        try:
            out = _eval(node.a, vars_, bank, memo) / den
        except DomainError as e:
            raise DomainError(f"{e} in {node_repr(node)}") from None
    elif isinstance(node, Neg):
        out = -_eval(node.a, vars_, bank, memo)
    elif isinstance(node, Pow):
        try:
            out = _jetops.powr(_eval(node.a, vars_, bank, memo), node.exponent)
        except DomainError as e:
            raise DomainError(f"{e} in {node_repr(node)}") from None
    elif isinstance(node, Call):
        try:
            out = _UNARY[node.fn](_eval(node.a, vars_, bank, memo))
        except DomainError as e:
            raise DomainError(f"{e} in {node_repr(node)}") from None
    elif isinstance(node, ProfileCall):
        if bank is None or node.name not in bank:
            raise ContractViolation(f"unknown profile function '{node.name}'")
        u = _eval(node.a, vars_, bank, memo)
        if isinstance(u, (int, float)):
            u = Jet.constant(vars_[0].space, vars_[0].order, float(u))
        dvals = bank[node.name].derivs(u.value, u.order)
        out = u.compose(np.asarray(dvals, dtype=float))
    else:
        raise ContractViolation(f"unknown node type {type(node)!r}")
    if isinstance(out, (int, float)):
        out = Jet.constant(vars_[0].space, vars_[0].order, float(out))
    memo[key] = out
    return out


def jet_eval(expr: Expr, point, order: int, profile_bank=None) -> Jet:
    """Taylor coefficients of ``expr`` at ``point`` up to total ``order``."""
    point = np.asarray(point, dtype=float)
    space = JetSpace.get(len(point))
    if not (0 <= order <= space.max_order):
        raise ContractViolation(f"order {order} outside supported range")
    vars_ = [Jet.variable(space, order, i, point[i]) for i in range(len(point))]
    return _eval(expr, vars_, profile_bank, {})


def eval_value(expr: Expr, point, profile_bank=None) -> float:
    return jet_eval(expr, point, 0, profile_bank).value


# Central differences, nested one axis at a time; each level is O(h^2)
# accurate.  Orders three and four add one Richardson pass over the whole
# stencil: a single step cannot keep both the truncation term (wants small h)
# and the eps/h^3 cancellation noise (wants large h) inside the cross-check
# tolerances at float64.
FD_STEPS = {0: 0.0, 1: 1e-4, 2: 1e-4, 3: 6e-3, 4: 2e-2}


def fd_partial(expr: Expr, point, alpha, h: float | None = None, profile_bank=None) -> float:
    """Finite-difference estimate of the partial derivative d^alpha expr."""
    alpha = tuple(int(a) for a in alpha)
    total = sum(alpha)
    if total > 4:
        raise ContractViolation("finite differences support |alpha| <= 4")
    if h is None:
        h = FD_STEPS[total]
    if total > 0 and h <= 0:
        raise ContractViolation("step must be positive")
    point = np.asarray(point, dtype=float)

    def stencil(pt, remaining, step):
        for axis, cnt in enumerate(remaining):
            if cnt > 0:
                dec = list(remaining)
                dec[axis] -= 1
                up = pt.copy()
                up[axis] += step
                dn = pt.copy()
                dn[axis] -= step
                return (stencil(up, tuple(dec), step) - stencil(dn, tuple(dec), step)) / (2.0 * step)
        return eval_value(expr, pt, profile_bank)

    if total <= 2:
        return stencil(point, alpha, h)
    coarse = stencil(point, alpha, h)
    fine = stencil(point, alpha, h / 2.0)
    return (4.0 * fine - coarse) / 3.0


def node_repr(node: Expr) -> str:
    if isinstance(node, Const):
        v = node.value
        return repr(int(v)) if v == int(v) else repr(v)
    if isinstance(node, Var):
        return node.name or f"x{node.index}"
    if isinstance(node, Add):
        return f"({node_repr(node.a)} + {node_repr(node.b)})"
    if isinstance(node, Sub):
        return f"({node_repr(node.a)} - {node_repr(node.b)})"
    if isinstance(node, Mul):
        return f"({node_repr(node.a)}*{node_repr(node.b)})"
    if isinstance(node, Div):
        return f"({node_repr(node.a)}/{node_repr(node.b)})"
    if isinstance(node, Neg):
        return f"(-{node_repr(node.a)})"
    if isinstance(node, Pow):
        return f"{node_repr(node.a)}^{node.exponent:g}"
    if isinstance(node, Call):
        return f"{node.fn}({node_repr(node.a)})"
    if isinstance(node, ProfileCall):
        return f"{node.name}({node_repr(node.a)})"
    return repr(node)


# -- parser ------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[()+\-*/^,]))"
)


def _tokenize(text: str):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ContractViolation(f"cannot tokenize {text[pos:]!r}")
        pos = m.end()
        if m.lastgroup == "num":
            out.append(("num", float(m.group("num"))))
        elif m.lastgroup == "name":
            out.append(("name", m.group("name")))
        else:
            out.append(("op", m.group("op")))
    out.append(("end", None))
    return out


class _Parser:
    def __init__(self, tokens, var_names):
        self.toks = tokens
        self.pos = 0
        self.vars = {name: i for i, name in enumerate(var_names)}

    def peek(self):
        return self.toks[self.pos]

    def take(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ContractViolation(f"expected {op!r}, found {val!r}")

    def expr(self) -> Expr:
        node = self.term()
        while self.peek() == ("op", "+") or self.peek() == ("op", "-"):
            _, op = self.take()
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.peek() == ("op", "*") or self.peek() == ("op", "/"):
            _, op = self.take()
            rhs = self.unary()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def unary(self) -> Expr:
        if self.peek() == ("op", "-"):
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek() in (("op", "^"), ("op", "**")):
            self.take()
            return Pow(base, self.signed_number())
        return base

    def signed_number(self) -> float:
        sign = 1.0
        while self.peek() == ("op", "-"):
            self.take()
            sign = -sign
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return sign * val
        if kind == "op" and val == "(":
            self.take()
            inner = self.signed_number()
            self.expect_op(")")
            return sign * inner
        raise ContractViolation("exponent must be a numeric literal")

    def atom(self) -> Expr:
        kind, val = self.take()
        if kind == "num":
            return Const(val)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        if kind == "name":
            if self.peek() == ("op", "("):
                self.take()
                arg = self.expr()
                self.expect_op(")")
                if val in _UNARY:
                    return Call(val, arg)
                return ProfileCall(val, arg)
            if val in self.vars:
                return Var(self.vars[val], val)
            raise ContractViolation(f"unknown name {val!r}")
        raise ContractViolation(f"unexpected token {val!r}")


def parse(text: str, var_names=("s", "t", "u", "v")) -> Expr:
    p = _Parser(_tokenize(text), var_names)
    node = p.expr()
    if p.peek() != ("end", None):
        raise ContractViolation(f"trailing input near {p.peek()[1]!r}")
    return node


def var_names_for(nparams: int):
    if nparams <= 4:
        return ("s", "t", "u", "v")[:nparams]
    return ("s",) + tuple(f"t{i}" for i in range(1, nparams))
