"""Profile functions of the arc parameter s, with derivatives to order 4.

A profile bank maps names (phi, psi, phi1, phi2) to entries exposing
``derivs(x, k) -> [f(x), f'(x), ..., f^(k)(x)]``.  Three entry kinds cover
everything the chart catalog needs:

 * ExprProfile       -- a closed-form expression in s,
 * QuadratureProfile -- f' given in closed form, f recovered by quadrature,
 * PsiSolution       -- the solved torsion profile psi with
                        psi' = 1/2 + c * (prod_i (s + o_i))^(2/3).

Values of quadrature-backed entries are interpolated barycentrically on
Chebyshev nodes; derivative ladders always come from the analytic closed
forms, never from the interpolant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation, DomainError
from .expr import Call, Const, Expr, Mul, Pow, Var, jet_eval, parse
from .jets import JetSpace

GL_NODES, GL_WEIGHTS = np.polynomial.legendre.leggauss(16)
DEFAULT_NODES = 129

S = Var(0, "s")  # the single profile variable


def _deriv_ladder(dexpr: Expr, x: float, k: int, bank=None):
    """[g(x), g'(x), ..., g^(k-1)(x)] for the derivative expression g."""
    if k <= 0:
        return []
    j = jet_eval(dexpr, (x,), k - 1, bank)
    return [j.partial((m,)) for m in range(k)]


@dataclass(frozen=True)
class ExprProfile:
    expr: Expr

    def derivs(self, x: float, k: int):
        if k > 4:
            raise ContractViolation("profile derivative order exceeded (max 4)")
        j = jet_eval(self.expr, (x,), min(k, 4))
        return [j.partial((m,)) for m in range(k + 1)]


def _cheb_nodes(lo: float, hi: float, n: int) -> np.ndarray:
    j = np.arange(n + 1)
    return (lo + hi) / 2.0 + (hi - lo) / 2.0 * np.cos(np.pi * j / n)


def _bary_weights(n: int) -> np.ndarray:
    w = np.ones(n + 1)
    w[1::2] = -1.0
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def _bary_eval(nodes: np.ndarray, weights: np.ndarray, values: np.ndarray, x: float) -> float:
    d = x - nodes
    hit = np.argmin(np.abs(d))
    if abs(d[hit]) < 1e-14 * (1.0 + abs(x)):
        return float(values[hit])
    q = weights / d
    return float(np.dot(q, values) / np.sum(q))


def gl_integrate(fn, lo: float, hi: float, panels: int) -> float:
    """Composite 16-point Gauss-Legendre quadrature of a scalar callable."""
    if lo == hi:
        return 0.0
    edges = np.linspace(lo, hi, panels + 1)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        mid = (a + b) / 2.0
        half = (b - a) / 2.0
        total += half * float(np.dot(GL_WEIGHTS, fn(mid + half * GL_NODES)))
    return total


def _panels_for(length: float, floor: int = 1) -> int:
    return max(floor, int(math.ceil(abs(length) / 0.05)))


@dataclass(frozen=True)
class QuadratureProfile:
    """Antiderivative of a closed-form expression, anchored at (s0, f0)."""

    dexpr: Expr
    s0: float
    f0: float
    lo: float
    hi: float
    nodes: np.ndarray = field(repr=False, default=None)
    node_values: np.ndarray = field(repr=False, default=None)
    bary_w: np.ndarray = field(repr=False, default=None)

    @classmethod
    def build(cls, dexpr: Expr, s0: float, f0: float, lo: float, hi: float,
              n_nodes: int = DEFAULT_NODES):
        nodes = _cheb_nodes(lo, hi, n_nodes)
        order = np.argsort(nodes)
        fn = np.vectorize(lambda x: jet_eval(dexpr, (x,), 0).value)
        sorted_nodes = nodes[order]
        cumulative = np.empty_like(sorted_nodes)
        anchor = s0
        acc = f0
        # integrate outward from the anchor through successive gaps
        start = int(np.searchsorted(sorted_nodes, s0))
        right_acc, prev = f0, s0
        for i in range(start, len(sorted_nodes)):
            right_acc += gl_integrate(fn, prev, sorted_nodes[i], _panels_for(sorted_nodes[i] - prev))
            cumulative[i] = right_acc
            prev = sorted_nodes[i]
        left_acc, prev = f0, s0
        for i in range(start - 1, -1, -1):
            left_acc += gl_integrate(fn, prev, sorted_nodes[i], _panels_for(sorted_nodes[i] - prev))
            cumulative[i] = left_acc
            prev = sorted_nodes[i]
        values = np.empty_like(cumulative)
        values[order] = cumulative
        return cls(dexpr, s0, f0, lo, hi, nodes, values, _bary_weights(n_nodes))

    def value(self, x: float) -> float:
        if not (self.lo - 1e-12 <= x <= self.hi + 1e-12):
            raise DomainError(f"profile argument {x:.6g} outside [{self.lo:.6g}, {self.hi:.6g}]")
        return _bary_eval(self.nodes, self.bary_w, self.node_values, x)

    def derivs(self, x: float, k: int):
        if k > 4:
            raise ContractViolation("profile derivative order exceeded (max 4)")
        return [self.value(x)] + _deriv_ladder(self.dexpr, x, k)


def _offset_product(offsets) -> Expr:
    factors = [S if o == 0.0 else S + Const(float(o)) for o in offsets]
    prod = factors[0]
    for f in factors[1:]:
        prod = Mul(prod, f)
    return prod


@dataclass(frozen=True)
class PsiSolution:
    """psi(s) = s/2 + c * integral_0^s (prod_i (xi + o_i))^(2/3) dxi.

    The integrand's 2/3 power is evaluated as cbrt(x)^2 so the cube-root
    substitution xi = w^3 keeps the quadrature smooth through the root at 0,
    but construction still requires the product to stay positive on the
    range, matching the sign hypotheses under which the profile is used.
    """

    a: float | None
    b: float | None
    c: float
    offsets: tuple
    s_grid: np.ndarray = field(repr=False, default=None)
    psi_values: np.ndarray = field(repr=False, default=None)
    dpsi_values: np.ndarray = field(repr=False, default=None)
    ddpsi_values: np.ndarray = field(repr=False, default=None)
    interpolation_order: int = DEFAULT_NODES
    bary_w: np.ndarray = field(repr=False, default=None)
    dexpr: Expr = None

    @classmethod
    def build(cls, offsets, c: float, s_range, n_nodes: int = DEFAULT_NODES,
              a: float | None = None, b: float | None = None):
        if c == 0.0:
            raise ContractViolation("the profile constant c must be non-zero")
        lo, hi = float(s_range[0]), float(s_range[1])
        if not (0.0 < lo < hi):
            raise DomainError("s range must satisfy 0 < lo < hi")
        offsets = tuple(float(o) for o in offsets)
        probe = np.linspace(lo * 1e-3, hi, 512)
        prod = np.ones_like(probe)
        for o in offsets:
            prod *= probe + o
        if np.min(prod) <= 0.0:
            raise DomainError(
                f"offset product has a zero or sign change on (0, {hi:.6g}]"
            )
        dexpr = Const(0.5) + Const(c) * Pow(_offset_product(offsets), 2.0 / 3.0)

        def integrand_w(w):
            # xi = w^3, d xi = 3 w^2 dw; the bare-s root becomes w^2 factors
            vals = np.ones_like(w)
            for o in offsets:
                if o == 0.0:
                    vals *= w * w  # (w^3)^(2/3)
                else:
                    vals *= np.cbrt(w ** 3 + o) ** 2
            return 3.0 * w * w * vals

        nodes = _cheb_nodes(lo, hi, n_nodes)
        order = np.argsort(nodes)
        sorted_nodes = nodes[order]
        cumulative = np.empty_like(sorted_nodes)
        prev_w, acc = 0.0, 0.0
        for i, sn in enumerate(sorted_nodes):
            w_hi = np.cbrt(sn)
            floor = 8 if i == 0 else 1
            acc += gl_integrate(integrand_w, prev_w, w_hi,
                                _panels_for(4 * (w_hi - prev_w), floor))
            cumulative[i] = sn / 2.0 + c * acc
            prev_w = w_hi
        psi_vals = np.empty_like(cumulative)
        psi_vals[order] = cumulative
        space = JetSpace.get(1)
        dpsi = np.array([jet_eval(dexpr, (x,), 0).value for x in nodes])
        ddpsi = np.array([jet_eval(dexpr, (x,), 1).partial((1,)) for x in nodes])
        return cls(a, b, c, offsets, nodes, psi_vals, dpsi, ddpsi,
                   n_nodes, _bary_weights(n_nodes), dexpr)

    def value(self, x: float) -> float:
        lo, hi = self.s_grid.min(), self.s_grid.max()
        if not (lo - 1e-12 <= x <= hi + 1e-12):
            raise DomainError(f"psi argument {x:.6g} outside [{lo:.6g}, {hi:.6g}]")
        return _bary_eval(self.s_grid, self.bary_w, self.psi_values, x)

    def derivs(self, x: float, k: int):
        if k > 4:
            raise ContractViolation("profile derivative order exceeded (max 4)")
        return [self.value(x)] + _deriv_ladder(self.dexpr, x, k)


def solve_psi(a: float, b: float, c: float, s_range=(0.5, 2.0),
              n_nodes: int = DEFAULT_NODES) -> PsiSolution:
    """Solved biconservative profile for the explicit four-curvature chart."""
    if a == 0.0:
        raise ContractViolation("parameter a must be non-zero")
    return PsiSolution.build((0.0, 2.0 * a, 2.0 * b), c, s_range, n_nodes, a=a, b=b)


def solve_psi_offsets(offsets, c: float, s_range=(0.5, 2.0),
                      n_nodes: int = DEFAULT_NODES) -> PsiSolution:
    """Generalized profile with one pole term per offset (arbitrary count)."""
    return PsiSolution.build(offsets, c, s_range, n_nodes)


_POLE_TOL = 1e-8


def psi_ode_residual_general(entry, offsets, s: float) -> float:
    """|3 psi'' / (2 psi' - 1) - sum_i 1/(s + o_i)| at one point."""
    for o in offsets:
        if abs(s + o) < _POLE_TOL:
            raise DomainError(f"pole proximity: |s + {o:g}| < {_POLE_TOL:g}")
    _, dpsi, ddpsi = entry.derivs(s, 2)
    den = 2.0 * dpsi - 1.0
    if abs(den) < 1e-10:
        raise DomainError("2 psi' - 1 vanishes at the requested point")
    rhs = sum(1.0 / (s + o) for o in offsets)
    return abs(3.0 * ddpsi / den - rhs)


def psi_ode_residual(entry, a: float, b: float, s: float) -> float:
    return psi_ode_residual_general(entry, (0.0, 2.0 * a, 2.0 * b), s)


def rk4_solve(f, s0: float, y0: float, s_grid) -> np.ndarray:
    """Classic fourth-order step integration of y' = f(s, y) through s_grid."""
    s_grid = np.asarray(s_grid, dtype=float)
    out = np.empty_like(s_grid)
    s, y = s0, y0
    for i, target in enumerate(s_grid):
        span = target - s
        nsub = max(1, int(math.ceil(abs(span) / 1e-3)))
        h = span / nsub
        for _ in range(nsub):
            k1 = f(s, y)
            k2 = f(s + h / 2.0, y + h * k1 / 2.0)
            k3 = f(s + h / 2.0, y + h * k2 / 2.0)
            k4 = f(s + h, y + h * k3)
            y += h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
            s += h
        out[i] = y
        s = target
    return out


def psi_ode_rhs(offsets):
    offs = tuple(float(o) for o in offsets)

    def f(s, y):
        return (2.0 * y - 1.0) / 3.0 * sum(1.0 / (s + o) for o in offs)

    return f


# -- constraint pairs ----------------------------------------------------

PAIR_KINDS = {
    "sum1": ("cos", "sin"),    # phi'^2 + psi'^2 = 1
    "diffP": ("cosh", "sinh"),  # phi'^2 - psi'^2 = 1
    "diffM": ("sinh", "cosh"),  # phi'^2 - psi'^2 = -1
}


def make_profile_pair(kind: str, theta, s_range, s0: float | None = None,
                      phi0: float = 1.2, psi0: float = 0.3,
                      n_nodes: int = DEFAULT_NODES):
    """Unit-constraint profile pair (phi, psi) from an angle function theta(s)."""
    if kind not in PAIR_KINDS:
        raise ContractViolation(f"unknown pair kind {kind!r}")
    if isinstance(theta, str):
        theta = parse(theta, ("s",))
    lo, hi = float(s_range[0]), float(s_range[1])
    if s0 is None:
        s0 = (lo + hi) / 2.0
    f_phi, f_psi = PAIR_KINDS[kind]
    phi = QuadratureProfile.build(Call(f_phi, theta), s0, phi0, lo, hi, n_nodes)
    psi = QuadratureProfile.build(Call(f_psi, theta), s0, psi0, lo, hi, n_nodes)
    return phi, psi


def constraint_residual(kind: str, phi, psi, s: float) -> float:
    dphi = phi.derivs(s, 1)[1]
    dpsi = psi.derivs(s, 1)[1]
    if kind == "sum1":
        return abs(dphi * dphi + dpsi * dpsi - 1.0)
    if kind == "diffP":
        return abs(dphi * dphi - dpsi * dpsi - 1.0)
    if kind == "diffM":
        return abs(dphi * dphi - dpsi * dpsi + 1.0)
    raise ContractViolation(f"unknown pair kind {kind!r}")


@dataclass(frozen=True)
class DerivativeProfile:
    """View of another profile entry shifted by one derivative order."""

    base: object

    def derivs(self, x: float, k: int):
        return self.base.derivs(x, k + 1)[1:]


def check_derivative_consistency(entry, lo: float, hi: float, n: int = 25,
                                 tol: float = 1e-6) -> float:
    """Max |FD of value - supplied first derivative| over the range."""
    h = 1e-5 * (hi - lo)
    worst = 0.0
    for x in np.linspace(lo + 2 * h, hi - 2 * h, n):
        fd = (entry.derivs(x + h, 0)[0] - entry.derivs(x - h, 0)[0]) / (2.0 * h)
        worst = max(worst, abs(fd - entry.derivs(x, 1)[1]))
    if worst > tol:
        raise ContractViolation(
            f"profile value/derivative inconsistency {worst:.3e} exceeds {tol:g}"
        )
    return worst
