"""Truncated Taylor arithmetic: the forward differentiation engine.

Every Jet is immutable once built.  Binary operations truncate to the lower
of the two operand orders; unary analytic functions are applied by Horner
composition of the univariate derivative ladder with the nilpotent part of
the argument, so one multiplication table drives everything.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import ContractViolation, DomainError
from . import kernel
from .space import MAX_ORDER, JetSpace

TAU_DIV = 1e-13
TAU_POW = 1e-12

_FACT = [math.factorial(m) for m in range(MAX_ORDER + 1)]


def _mul_arrays(space: JetSpace, a: np.ndarray, b: np.ndarray, r: int) -> np.ndarray:
    n = space.ncoef[r]
    t = space.mul_tables[r]
    out = np.zeros(n)
    kernel.mul_into(out, a[:n], b[:n], t.i, t.j, t.k)
    return out


class Jet:
    __slots__ = ("space", "order", "c")

    def __init__(self, space: JetSpace, order: int, coeffs: np.ndarray):
        self.space = space
        self.order = order
        self.c = coeffs

    # -- constructors -------------------------------------------------

    @classmethod
    def constant(cls, space: JetSpace, order: int, value: float) -> "Jet":
        c = np.zeros(space.ncoef[order])
        c[0] = value
        return cls(space, order, c)

    @classmethod
    def variable(cls, space: JetSpace, order: int, axis: int, value: float) -> "Jet":
        c = np.zeros(space.ncoef[order])
        c[0] = value
        if order >= 1:
            c[1 + axis] = 1.0
        return cls(space, order, c)

    # -- accessors ----------------------------------------------------

    @property
    def value(self) -> float:
        return float(self.c[0])

    def partial(self, alpha) -> float:
        """Partial derivative d^alpha f (not the Taylor coefficient)."""
        alpha = tuple(alpha)
        if sum(alpha) > self.order:
            raise ContractViolation(f"partial {alpha} exceeds jet order {self.order}")
        p = self.space.position[alpha]
        return float(self.c[p] * self.space.factorial[p])

    def gradient(self) -> np.ndarray:
        if self.order < 1:
            raise ContractViolation("gradient needs order >= 1")
        return self.c[1 : 1 + self.space.nvars].copy()

    def truncate(self, r: int) -> "Jet":
        if r >= self.order:
            return self
        return Jet(self.space, r, self.c[: self.space.ncoef[r]])

    def deriv(self, axis: int) -> "Jet":
        """Jet of the partial derivative along one axis; order drops by one."""
        if self.order < 1:
            raise ContractViolation("cannot differentiate an order-0 jet")
        r = self.order - 1
        n = self.space.ncoef[r]
        dst, src, fac = self.space.deriv_tables[axis]
        out = np.zeros(n)
        out[dst[:n]] = fac[:n] * self.c[src[:n]]
        return Jet(self.space, r, out)

    # -- ring operations ----------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.space is not self.space:
                raise ContractViolation("jets from different spaces")
            return other
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            c = self.c.copy()
            c[0] += other
            return Jet(self.space, self.order, c)
        r = min(self.order, o.order)
        n = self.space.ncoef[r]
        return Jet(self.space, r, self.c[:n] + o.c[:n])

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.space, self.order, -self.c)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            c = self.c.copy()
            c[0] -= other
            return Jet(self.space, self.order, c)
        r = min(self.order, o.order)
        n = self.space.ncoef[r]
        return Jet(self.space, r, self.c[:n] - o.c[:n])

    def __rsub__(self, other):
        c = -self.c
        c[0] += other
        return Jet(self.space, self.order, c)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return Jet(self.space, self.order, self.c * other)
        r = min(self.order, o.order)
        return Jet(self.space, r, _mul_arrays(self.space, self.c, o.c, r))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return Jet(self.space, self.order, self.c / other)
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def reciprocal(self) -> "Jet":
        u0 = self.value
        if abs(u0) <= TAU_DIV:
            raise DomainError(f"division by near-zero value {u0:.3e}")
        dvals = np.empty(self.order + 1)
        dvals[0] = 1.0 / u0
        for m in range(1, self.order + 1):
            dvals[m] = -m * dvals[m - 1] / u0
        return self.compose(dvals)

    # -- analytic functions -------------------------------------------

    def compose(self, dvals) -> "Jet":
        """Apply a univariate analytic f given f^(m)(value) for m = 0..order."""
        r = self.order
        space = self.space
        w = self.c.copy()
        w[0] = 0.0
        out = np.zeros(space.ncoef[r])
        out[0] = dvals[r] / _FACT[r]
        for m in range(r - 1, -1, -1):
            out = _mul_arrays(space, out, w, r)
            out[0] += dvals[m] / _FACT[m]
        return Jet(space, r, out)


def _ladder(fn_cycle, u0: float, order: int):
    return [fn_cycle[m % len(fn_cycle)](u0) for m in range(order + 1)]


def sin(u: Jet) -> Jet:
    return u.compose(_ladder([math.sin, math.cos, lambda x: -math.sin(x), lambda x: -math.cos(x)], u.value, u.order))


def cos(u: Jet) -> Jet:
    return u.compose(_ladder([math.cos, lambda x: -math.sin(x), lambda x: -math.cos(x), math.sin], u.value, u.order))


def sinh(u: Jet) -> Jet:
    return u.compose(_ladder([math.sinh, math.cosh], u.value, u.order))


def cosh(u: Jet) -> Jet:
    return u.compose(_ladder([math.cosh, math.sinh], u.value, u.order))


def exp(u: Jet) -> Jet:
    e0 = math.exp(u.value)
    return u.compose([e0] * (u.order + 1))


def sqrt(u: Jet) -> Jet:
    return powr(u, 0.5)


def powr(u: Jet, p: float) -> Jet:
    """u**p with real exponent.

    Integer exponents use repeated multiplication and are defined for any
    base value; fractional exponents require a strictly positive base.
    """
    if p == round(p) and abs(p) <= 16:
        return _ipow(u, int(round(p)))
    u0 = u.value
    if u0 <= TAU_POW:
        raise DomainError(f"fractional power of non-positive base {u0:.3e}")
    dvals = np.empty(u.order + 1)
    dvals[0] = u0 ** p
    for m in range(1, u.order + 1):
        dvals[m] = dvals[m - 1] * (p - (m - 1)) / u0
    return u.compose(dvals)


def _ipow(u: Jet, k: int) -> Jet:
    if k < 0:
        return _ipow(u, -k).reciprocal()
    result = Jet.constant(u.space, u.order, 1.0)
    base = u
    while k:
        if k & 1:
            result = result * base
        base = base * base if k > 1 else base
        k >>= 1
    return result
