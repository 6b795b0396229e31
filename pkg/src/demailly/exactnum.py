"""Exact integer arithmetic around n-th roots.

Everything here works on Python ints and ``fractions.Fraction``; no floats
are involved anywhere.  The central primitive is :func:`cmp_radical`, which
decides ``a <=> b * s**(j/n)`` by integer powering.  :class:`AlgebraicExpr`
models elements of Q[theta]/(theta**n - s) with theta = s**(1/n) and is
used for sign diagnostics only.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "AlgebraicExpr",
    "RadicalOrdering",
    "Sign",
    "ae_arith",
    "ae_sign",
    "binomial",
    "cmp_radical",
    "floor_mul_nth_root",
    "int_nth_root",
    "perfect_power_reduction",
]


class RadicalOrdering(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1

    def flipped(self) -> "RadicalOrdering":
        return RadicalOrdering(-self.value)


class Sign(enum.Enum):
    NEGATIVE = "Negative"
    ZERO = "Zero"
    POSITIVE = "Positive"
    INDETERMINATE = "Indeterminate"


def binomial(a: int, b: int) -> int:
    """C(a, b) for nonnegative integers, 0 when b > a."""
    if a < 0 or b < 0:
        raise ValueError("binomial arguments must be nonnegative")
    return math.comb(a, b)


def int_nth_root(s: int, n: int) -> int:
    """Return k with k**n <= s < (k+1)**n.

    Newton iteration on integers, started above the root so the sequence
    decreases monotonically to the floor.
    """
    if s < 1:
        raise ValueError(f"int_nth_root needs s >= 1, got {s}")
    if n < 1:
        raise ValueError(f"int_nth_root needs n >= 1, got {n}")
    if n == 1:
        return s
    if n == 2:
        return math.isqrt(s)
    x = 1 << (-(-s.bit_length() // n))  # 2**ceil(bits/n) > s**(1/n)
    while True:
        y = ((n - 1) * x + s // x ** (n - 1)) // n
        if y >= x:
            break
        x = y
    # guard against off-by-one from integer division
    while x**n > s:
        x -= 1
    while (x + 1) ** n <= s:
        x += 1
    return x


def _nth_root_floor0(v: int, n: int) -> int:
    return 0 if v == 0 else int_nth_root(v, n)


def floor_mul_nth_root(t: int, s: int, n: int) -> int:
    """floor(t * s**(1/n)) for t >= 0, computed as the n-th root of t**n * s."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if s < 1 or n < 1:
        raise ValueError("need s >= 1 and n >= 1")
    return _nth_root_floor0(t**n * s, n)


def cmp_radical(a: int, b: int, s: int, j: int, n: int) -> RadicalOrdering:
    """Order of ``a`` relative to ``b * s**(j/n)`` for a, b >= 0.

    Both sides are nonnegative, so raising to the n-th power preserves the
    order: compare a**n with b**n * s**j.
    """
    if a < 0 or b < 0:
        raise ValueError("cmp_radical operands must be nonnegative")
    if j < 0 or n < 1 or s < 1:
        raise ValueError("need j >= 0, n >= 1, s >= 1")
    lhs = a**n
    rhs = b**n * s**j
    if lhs < rhs:
        return RadicalOrdering.LESS
    if lhs > rhs:
        return RadicalOrdering.GREATER
    return RadicalOrdering.EQUAL


def perfect_power_reduction(s: int, n: int) -> tuple[int, int]:
    """Return (u, n') with s**(1/n) == u**(1/n') and x**n' - u irreducible.

    Picks the largest g dividing n such that s is a perfect g-th power, then
    u = s**(1/g), n' = n/g.  By Capelli's theorem x**n' - u is irreducible
    over Q for u > 0 exactly when u is not a p-th power for any prime p | n',
    which maximality of g guarantees.
    """
    for g in sorted((d for d in range(1, n + 1) if n % d == 0), reverse=True):
        u = int_nth_root(s, g)
        if u**g == s:
            return u, n // g
    raise AssertionError("unreachable: g = 1 always succeeds")


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class AlgebraicExpr:
    """sum(coeffs[j] * theta**j) with theta = s**(1/n), reduced mod theta**n - s."""

    s: int
    n: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if self.s < 1 or self.n < 1:
            raise ValueError("AlgebraicExpr needs s >= 1 and n >= 1")
        if len(self.coeffs) != self.n:
            raise ValueError(
                f"expected {self.n} coefficients, got {len(self.coeffs)}"
            )
        object.__setattr__(self, "coeffs", tuple(_as_fraction(c) for c in self.coeffs))

    # constructors

    @classmethod
    def from_coeffs(cls, s: int, n: int, coeffs: Iterable) -> "AlgebraicExpr":
        """Build from an arbitrary-length coefficient list, reducing theta**n -> s."""
        out = [Fraction(0)] * n
        for j, c in enumerate(coeffs):
            if c:
                q, r = divmod(j, n)
                out[r] += c * s**q if q else c
        return cls(s, n, tuple(out))

    @classmethod
    def constant(cls, s: int, n: int, c) -> "AlgebraicExpr":
        return cls.from_coeffs(s, n, [c])

    @classmethod
    def theta(cls, s: int, n: int) -> "AlgebraicExpr":
        """The radical s**(1/n) itself."""
        return cls.from_coeffs(s, n, [0, 1])

    # ring operations

    def _check(self, other: "AlgebraicExpr") -> None:
        if (self.s, self.n) != (other.s, other.n):
            raise ValueError(
                f"mismatched radicals: ({self.s}, {self.n}) vs ({other.s}, {other.n})"
            )

    def _coerce(self, other) -> "AlgebraicExpr":
        if isinstance(other, AlgebraicExpr):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return AlgebraicExpr.constant(self.s, self.n, other)
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgebraicExpr(self.s, self.n, (self.coeffs[0] + other, *self.coeffs[1:]))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return AlgebraicExpr(
            self.s, self.n, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicExpr(self.s, self.n, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgebraicExpr(self.s, self.n, tuple(c * other for c in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prod = [Fraction(0)] * (2 * self.n - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        prod[i + j] += a * b
        return AlgebraicExpr.from_coeffs(self.s, self.n, prod)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not supported; use inverse helpers")
        result = AlgebraicExpr.constant(self.s, self.n, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return AlgebraicExpr(self.s, self.n, tuple(c / other for c in self.coeffs))
        return NotImplemented

    def is_zero_vector(self) -> bool:
        return not any(self.coeffs)

    def rational_value(self) -> Fraction | None:
        """The value when the expression is a pure rational, else None."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    @classmethod
    def inverse_theta_minus(cls, s: int, n: int, k: int) -> "AlgebraicExpr":
        """1 / (theta - k), defined whenever k**n != s.

        Uses (theta - k) * sum_j k**j theta**(n-1-j) = theta**n - k**n = s - k**n.
        """
        denom = s - k**n
        if denom == 0:
            raise ZeroDivisionError(f"theta - {k} is zero for s={s}, n={n}")
        coeffs = [Fraction(k ** (n - 1 - j), denom) for j in range(n)]
        return cls(s, n, tuple(coeffs))

    def __repr__(self) -> str:
        terms = ", ".join(str(c) for c in self.coeffs)
        return f"AlgebraicExpr(s={self.s}, n={self.n}, [{terms}])"


def ae_arith(lhs: AlgebraicExpr, rhs: AlgebraicExpr, op: str) -> AlgebraicExpr:
    """Apply ``op`` in {'add', 'sub', 'mul'} to two expressions over the same radical."""
    lhs._check(rhs)
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    raise ValueError(f"unknown op {op!r}")


def _reduce_to_irreducible(x: AlgebraicExpr) -> tuple[int, int, list[Fraction]]:
    """Rewrite x over theta' = u**(1/n') with x**n' - u irreducible."""
    u, n_red = perfect_power_reduction(x.s, x.n)
    if n_red == x.n:
        return u, n_red, list(x.coeffs)
    # same real number theta = u**(1/n_red); only the reduction rule changes
    out = [Fraction(0)] * n_red
    for j, c in enumerate(x.coeffs):
        q, r = divmod(j, n_red)
        out[r] += c * u**q
    return u, n_red, out


def _interval_sign(coeffs: Sequence[Fraction], u: int, n: int, bits: int) -> Sign:
    # theta in [lo, lo+1] / 2**bits
    lo = _nth_root_floor0(u << (n * bits), n)
    scale = 1 << bits
    lower = Fraction(0)
    upper = Fraction(0)
    lo_pow, hi_pow = 1, 1
    for j, c in enumerate(coeffs):
        if j:
            lo_pow *= lo
            hi_pow *= lo + 1
        if c:
            den = scale**j
            a, b = Fraction(lo_pow, den), Fraction(hi_pow, den)
            if c > 0:
                lower += c * a
                upper += c * b
            else:
                lower += c * b
                upper += c * a
    if lower > 0:
        return Sign.POSITIVE
    if upper < 0:
        return Sign.NEGATIVE
    return Sign.INDETERMINATE


def ae_sign(x: AlgebraicExpr, max_precision_bits: int = 4096) -> Sign:
    """Sign of an expression by interval evaluation of theta.

    Precision starts at 128 bits and doubles until the enclosure excludes 0
    or ``max_precision_bits`` is exceeded.
    """
    if max_precision_bits < 1:
        raise ValueError("max_precision_bits must be positive")
    u, n_red, coeffs = _reduce_to_irreducible(x)
    if not any(coeffs):
        return Sign.ZERO
    if not any(coeffs[1:]):
        return Sign.POSITIVE if coeffs[0] > 0 else Sign.NEGATIVE
    bits = min(128, max_precision_bits)
    while True:
        sign = _interval_sign(coeffs, u, n_red, bits)
        if sign is not Sign.INDETERMINATE or bits >= max_precision_bits:
            return sign
        bits = min(2 * bits, max_precision_bits)
