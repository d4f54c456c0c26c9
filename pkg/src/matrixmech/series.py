"""Truncated power series in the anharmonic coupling.

A LambdaSeries is a polynomial c0 + c1*lam + c2*lam^2 + ... stored as a
coefficient tuple.  Coefficients may be floats or exact Fractions; the
arithmetic never forces a type, so solving with Fraction inputs yields
exact rational coefficients for golden tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


def _trim(coeffs: Sequence) -> tuple:
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


@dataclass(frozen=True)
class LambdaSeries:
    """Immutable truncated series in the coupling lam."""

    coeffs: tuple = ()

    @staticmethod
    def const(value) -> "LambdaSeries":
        return LambdaSeries(_trim((value,)))

    @staticmethod
    def zero() -> "LambdaSeries":
        return LambdaSeries(())

    @staticmethod
    def from_coeffs(coeffs: Iterable) -> "LambdaSeries":
        return LambdaSeries(_trim(tuple(coeffs)))

    @property
    def order(self) -> int:
        """Highest stored power (-1 for the zero series)."""
        return len(self.coeffs) - 1

    def __getitem__(self, k: int):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return 0

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __add__(self, other: "LambdaSeries") -> "LambdaSeries":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return LambdaSeries(_trim(out))

    def __sub__(self, other: "LambdaSeries") -> "LambdaSeries":
        return self + (-other)

    def __neg__(self) -> "LambdaSeries":
        return LambdaSeries(tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, LambdaSeries):
            if not self.coeffs or not other.coeffs:
                return LambdaSeries(())
            out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if not a:
                    continue
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = out[i + j] + a * b
            return LambdaSeries(_trim(out))
        return self.scaled(other)

    __rmul__ = __mul__

    def scaled(self, factor) -> "LambdaSeries":
        return LambdaSeries(_trim(tuple(c * factor for c in self.coeffs)))

    def shifted(self, powers: int = 1) -> "LambdaSeries":
        """Multiply by lam**powers."""
        if not self.coeffs:
            return self
        return LambdaSeries((0,) * powers + self.coeffs)

    def truncated(self, max_order: int) -> "LambdaSeries":
        return LambdaSeries(_trim(self.coeffs[: max_order + 1]))

    def eval(self, lam) -> float:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * lam + c
        return acc

    def max_abs(self, max_order: int | None = None):
        cs = self.coeffs if max_order is None else self.coeffs[: max_order + 1]
        return max((abs(c) for c in cs), default=0)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            parts.append(f"{c}" if k == 0 else f"{c}*lam^{k}")
        return " + ".join(parts) if parts else "0"


ZERO = LambdaSeries.zero()
