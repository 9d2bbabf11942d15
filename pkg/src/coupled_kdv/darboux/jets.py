"""Truncated x-derivative jets.

A :class:`Jet` stores a quantity together with its first ``order``
x-derivatives at one or many sample points.  Products and quotients follow
the Leibniz rule, so the Darboux formulas can be written exactly as they are
stated while every derivative stays analytic.
"""

from __future__ import annotations

from math import comb

import numpy as np


class Jet:
    """Value and x-derivatives ``coeffs[k] = d^k q / dx^k``, k = 0..order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.ndim == 0:
            coeffs = coeffs[None]
        self.coeffs = coeffs

    @property
    def order(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def value(self) -> np.ndarray:
        return self.coeffs[0]

    def __getitem__(self, k: int) -> np.ndarray:
        return self.coeffs[k]

    @classmethod
    def constant(cls, value, order: int, shape=()) -> "Jet":
        coeffs = np.zeros((order + 1,) + tuple(shape), dtype=complex)
        coeffs[0] = value
        return cls(coeffs)

    @classmethod
    def zeros(cls, order: int, shape=()) -> "Jet":
        return cls.constant(0.0, order, shape)

    def truncate(self, order: int) -> "Jet":
        return Jet(self.coeffs[: order + 1])

    def d(self) -> "Jet":
        """x-derivative; the result carries one order less."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        return Jet(self.coeffs[1:])

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            return other
        return Jet.constant(other, self.order, np.shape(self.coeffs[0]))

    def __add__(self, other) -> "Jet":
        other = self._coerce(other)
        k = min(self.order, other.order)
        return Jet(self.coeffs[: k + 1] + other.coeffs[: k + 1])

    __radd__ = __add__

    def __neg__(self) -> "Jet":
        return Jet(-self.coeffs)

    def __sub__(self, other) -> "Jet":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Jet":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Jet":
        if not isinstance(other, Jet):
            return Jet(self.coeffs * other)
        k = min(self.order, other.order)
        f, g = self.coeffs, other.coeffs
        out = [sum(comb(n, j) * f[j] * g[n - j] for j in range(n + 1)) for n in range(k + 1)]
        return Jet(np.stack(out))

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        g = self.coeffs
        h = [1.0 / g[0]]
        for n in range(1, self.order + 1):
            acc = sum(comb(n, j) * g[j] * h[n - j] for j in range(1, n + 1))
            h.append(-acc * h[0])
        return Jet(np.stack(h))

    def __truediv__(self, other) -> "Jet":
        if not isinstance(other, Jet):
            return Jet(self.coeffs / other)
        return self * other.reciprocal()

    def __rtruediv__(self, other) -> "Jet":
        return self.reciprocal() * other

    def __pow__(self, p: int) -> "Jet":
        if not isinstance(p, int) or p < 0:
            raise ValueError("only non-negative integer powers are supported")
        out = Jet.constant(1.0, self.order, np.shape(self.coeffs[0]))
        for _ in range(p):
            out = out * self
        return out

    def __repr__(self) -> str:
        return f"Jet(order={self.order}, shape={self.coeffs.shape[1:]})"
