"""Coefficient layout and precomputed tables for truncated multivariate jets.

A jet of order k in ``nvars`` variables stores the Taylor coefficients
c_alpha = (d^alpha f) / alpha! for every multi-index alpha with |alpha| <= k,
in a fixed graded-lexicographic layout (degree first, then lexicographic with
variable 0 ranked highest).  Because lower degrees come first, the order-r
prefix of an order-k jet (r <= k) is itself a valid order-r jet, which lets
all operations truncate by slicing.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

MAX_ORDER = 4


def _multi_indices(nvars: int, max_order: int):
    out = []
    for deg in range(max_order + 1):
        block = [
            alpha
            for alpha in itertools.product(range(deg + 1), repeat=nvars)
            if sum(alpha) == deg
        ]
        block.sort(key=lambda a: tuple(-x for x in a))
        out.extend(block)
    return out


@dataclass(frozen=True)
class _MulTable:
    i: np.ndarray
    j: np.ndarray
    k: np.ndarray


class JetSpace:
    """Shared immutable tables for jets in a fixed number of variables."""

    _cache: dict[int, "JetSpace"] = {}

    def __init__(self, nvars: int, max_order: int = MAX_ORDER):
        self.nvars = nvars
        self.max_order = max_order
        self.indices = _multi_indices(nvars, max_order)
        self.position = {alpha: p for p, alpha in enumerate(self.indices)}
        self.degree = np.array([sum(a) for a in self.indices], dtype=np.int32)
        self.ncoef = [
            sum(1 for a in self.indices if sum(a) <= r) for r in range(max_order + 1)
        ]
        self.factorial = np.array(
            [math.prod(math.factorial(x) for x in a) for a in self.indices]
        )
        self.mul_tables = [self._build_mul_table(r) for r in range(max_order + 1)]
        # Derivative along axis a: out[pos(beta)] = (beta_a + 1) * in[pos(beta + e_a)],
        # entries sorted by destination so order-r prefixes stay aligned.
        self.deriv_tables = []
        for axis in range(nvars):
            dst, src, fac = [], [], []
            for p, alpha in enumerate(self.indices):
                if sum(alpha) >= max_order:
                    continue
                up = list(alpha)
                up[axis] += 1
                dst.append(p)
                src.append(self.position[tuple(up)])
                fac.append(float(up[axis]))
            order = np.argsort(np.asarray(dst, dtype=np.int64), kind="stable")
            self.deriv_tables.append(
                (
                    np.asarray(dst, dtype=np.int64)[order],
                    np.asarray(src, dtype=np.int64)[order],
                    np.asarray(fac)[order],
                )
            )

    def _build_mul_table(self, r: int) -> _MulTable:
        ti, tj, tk = [], [], []
        n = self.ncoef[r]
        for i in range(n):
            di = self.degree[i]
            for j in range(n):
                if di + self.degree[j] > r:
                    continue
                alpha = tuple(
                    x + y for x, y in zip(self.indices[i], self.indices[j])
                )
                ti.append(i)
                tj.append(j)
                tk.append(self.position[alpha])
        return _MulTable(
            np.asarray(ti, dtype=np.int32),
            np.asarray(tj, dtype=np.int32),
            np.asarray(tk, dtype=np.int32),
        )

    @classmethod
    def get(cls, nvars: int) -> "JetSpace":
        if nvars not in cls._cache:
            cls._cache[nvars] = cls(nvars)
        return cls._cache[nvars]

    def __reduce__(self):
        return (JetSpace.get, (self.nvars,))
