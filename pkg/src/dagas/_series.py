"""Dense truncated power series over the rationals.

Just enough arithmetic to substitute exact animal-count series into printed
algebraic identities and to expand closed forms like sqrt(1 - 4t - 4t^2)
(as a formal series with constant term 1) through a fixed order.
"""

from __future__ import annotations

from fractions import Fraction


class TSeries:
    """Coefficients c[0..order] of a series truncated after t^order."""

    __slots__ = ("order", "c")

    def __init__(self, coeffs, order: int):
        self.order = order
        c = [Fraction(x) for x in coeffs[: order + 1]]
        c += [Fraction(0)] * (order + 1 - len(c))
        self.c = c

    @classmethod
    def const(cls, x, order: int) -> "TSeries":
        return cls([Fraction(x)], order)

    @classmethod
    def t(cls, order: int) -> "TSeries":
        return cls([0, 1], order)

    def __add__(self, other):
        other = self._coerce(other)
        return TSeries([a + b for a, b in zip(self.c, other.c)], self.order)

    def __sub__(self, other):
        other = self._coerce(other)
        return TSeries([a - b for a, b in zip(self.c, other.c)], self.order)

    def __neg__(self):
        return TSeries([-a for a in self.c], self.order)

    def __mul__(self, other):
        other = self._coerce(other)
        n = self.order
        out = [Fraction(0)] * (n + 1)
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            for j in range(0, n + 1 - i):
                b = other.c[j]
                if b:
                    out[i + j] += a * b
        return TSeries(out, n)

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __pow__(self, k: int):
        result = TSeries.const(1, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "TSeries":
        if self.c[0] == 0:
            raise ZeroDivisionError("series has zero constant term")
        n = self.order
        inv = [Fraction(0)] * (n + 1)
        inv[0] = 1 / self.c[0]
        for k in range(1, n + 1):
            acc = Fraction(0)
            for j in range(1, k + 1):
                acc += self.c[j] * inv[k - j]
            inv[k] = -acc / self.c[0]
        return TSeries(inv, n)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def sqrt(self) -> "TSeries":
        """Formal square root, requires constant term 1."""
        if self.c[0] != 1:
            raise ValueError("sqrt needs constant term 1")
        n = self.order
        s = [Fraction(0)] * (n + 1)
        s[0] = Fraction(1)
        for k in range(1, n + 1):
            acc = self.c[k]
            for j in range(1, k):
                acc -= s[j] * s[k - j]
            s[k] = acc / 2
        return TSeries(s, n)

    def _coerce(self, other) -> "TSeries":
        if isinstance(other, TSeries):
            if other.order != self.order:
                raise ValueError("mixed truncation orders")
            return other
        return TSeries.const(other, self.order)

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.c)

    def __repr__(self):
        return f"TSeries({self.c}, order={self.order})"
