"""Degree bounds for fat points and the inequality chain behind them.

Part (a): for any s points in P^n,
    alpha(I^(m)) <= floor(s**(1/n) * (m+n-1)) - n + 1.

Part (b): with k = floor(s**(1/n)) and eps its fractional part, if
    (n-1)(k-2) >= 2 eps (m-1)
then alpha(I^(m)) <= k(m+n-1) - n + 1.  The argument reduces to
    C(k(m+n-1)+1, n) > C(m+n-1, n) * s,
which in turn follows from one quadratic inequality per factor pair.

Every decision below is made with integer arithmetic only (cmp_radical).
The :class:`Certificate` re-expresses the proof's coefficients over
theta = s**(1/n) and is a diagnostic on top of that.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .exactnum import (
    AlgebraicExpr,
    RadicalOrdering,
    Sign,
    ae_sign,
    binomial,
    cmp_radical,
    floor_mul_nth_root,
    int_nth_root,
    perfect_power_reduction,
)

__all__ = [
    "BoundReport",
    "Certificate",
    "Instance",
    "MaxM",
    "MaxMKind",
    "MssClass",
    "PowerComparison",
    "RootData",
    "UnsupportedDimension",
    "bound_report",
    "certificate",
    "compare_mss",
    "condition_comparison",
    "delta_bound",
    "demailly_condition",
    "factor_inequality",
    "k_bound",
    "max_m",
    "root_data",
    "sufficient_condition",
]


class UnsupportedDimension(ValueError):
    """Raised by part (b) operations when n = 1."""


@dataclass(frozen=True)
class Instance:
    n: int
    s: int
    m: int

    def __post_init__(self):
        for name in ("n", "s", "m"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool):
                raise TypeError(f"{name} must be an int, got {type(v).__name__}")
            if v < 1:
                raise ValueError(f"{name} must be >= 1, got {v}")

    @property
    def t(self) -> int:
        """m + n - 1, the multiplier that appears throughout."""
        return self.m + self.n - 1


@dataclass(frozen=True)
class RootData:
    s: int
    n: int
    k: int
    epsilon_is_zero: bool


@lru_cache(maxsize=4096)
def root_data(s: int, n: int) -> RootData:
    k = int_nth_root(s, n)
    return RootData(s=s, n=n, k=k, epsilon_is_zero=(k**n == s))


def _require_n_ge_2(n: int, what: str) -> None:
    if n < 2:
        raise UnsupportedDimension(f"{what} is undefined for n = 1 (divides by n - 1)")


def delta_bound(inst: Instance) -> int:
    """Part (a) bound: floor((m+n-1) * s**(1/n)) - (n-1)."""
    return floor_mul_nth_root(inst.t, inst.s, inst.n) - (inst.n - 1)


def k_bound(inst: Instance) -> int:
    """Part (b) bound: k(m+n-1) - n + 1."""
    k = root_data(inst.s, inst.n).k
    return k * inst.t - inst.n + 1


@dataclass(frozen=True)
class PowerComparison:
    """The integer comparison a**n <=> b**n * s**j behind a radical test."""

    a: int
    b: int
    s: int
    j: int
    n: int

    @property
    def lhs(self) -> int:
        return self.a**self.n

    @property
    def rhs(self) -> int:
        return self.b**self.n * self.s**self.j

    @property
    def ordering(self) -> RadicalOrdering:
        return cmp_radical(self.a, self.b, self.s, self.j, self.n)


def condition_comparison(inst: Instance) -> PowerComparison | None:
    """Integer form of the condition for k >= 2, reduced by the common gcd.

    (n-1)(k-2) >= 2(m-1)(theta - k)  <=>  (n-1)(k-2) + 2(m-1)k >= 2(m-1) theta.
    Returns None when k < 2 (the condition fails outright).
    """
    _require_n_ge_2(inst.n, "the part (b) condition")
    k = root_data(inst.s, inst.n).k
    if k < 2:
        return None
    a = (inst.n - 1) * (k - 2) + 2 * (inst.m - 1) * k
    b = 2 * (inst.m - 1)
    g = math.gcd(a, b)
    if g > 1:
        a, b = a // g, b // g
    return PowerComparison(a=a, b=b, s=inst.s, j=1, n=inst.n)


def demailly_condition(inst: Instance) -> bool:
    """Whether floor(s**(1/n)) - 2 >= 2 eps (m-1) / (n-1), decided exactly."""
    cmp = condition_comparison(inst)
    if cmp is None:
        return False
    return cmp.ordering is not RadicalOrdering.LESS


class MaxMKind(enum.Enum):
    NONE = "None"
    UNBOUNDED = "Unbounded"
    BOUNDED = "Bounded"


@dataclass(frozen=True)
class MaxM:
    kind: MaxMKind
    m_max: int | None = None
    # comparisons at m_max (holds) and m_max + 1 (fails) when bounded
    last_true: PowerComparison | None = None
    first_false: PowerComparison | None = None

    def __str__(self) -> str:
        if self.kind is MaxMKind.BOUNDED:
            return str(self.m_max)
        return self.kind.value


def max_m(n: int, s: int) -> MaxM:
    """Largest m for which the condition holds at (n, s).

    The condition is antitone in m, so an exponential probe followed by
    bisection finds the boundary.
    """
    _require_n_ge_2(n, "max_m")
    rd = root_data(s, n)
    if rd.k < 2:
        return MaxM(MaxMKind.NONE)
    if rd.epsilon_is_zero:
        return MaxM(MaxMKind.UNBOUNDED)

    def holds(m: int) -> bool:
        return demailly_condition(Instance(n, s, m))

    lo, hi = 1, 2  # holds(1) is k >= 2
    while holds(hi):
        lo, hi = hi, 2 * hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if holds(mid):
            lo = mid
        else:
            hi = mid
    return MaxM(
        MaxMKind.BOUNDED,
        lo,
        last_true=condition_comparison(Instance(n, s, lo)),
        first_false=condition_comparison(Instance(n, s, lo + 1)),
    )


def sufficient_condition(inst: Instance) -> bool:
    """C(k(m+n-1)+1, n) > C(m+n-1, n) * s, evaluated on big integers."""
    n, s = inst.n, inst.s
    k = root_data(s, n).k
    return binomial(k * inst.t + 1, n) > binomial(inst.t, n) * s


def factor_comparison(inst: Instance, i: int) -> PowerComparison:
    n, m, t = inst.n, inst.m, inst.t
    if not 0 <= i <= (n - 1) // 2:
        raise ValueError(f"factor index i={i} outside 0..{(n - 1) // 2}")
    k = root_data(inst.s, n).k
    kt = k * t
    lhs = (kt + 1 - i) * (kt + 1 - (n - 1) + i)
    rhs = (t - i) * (m + i)
    # (k + eps)**2 == s**(2/n)
    return PowerComparison(a=lhs, b=rhs, s=inst.s, j=2, n=n)


def factor_inequality(inst: Instance, i: int) -> bool:
    """(kt+1-i)(kt+1-(n-1)+i) > (k+eps)**2 (t-i)(m+i) with t = m+n-1."""
    return factor_comparison(inst, i).ordering is RadicalOrdering.GREATER


class MssClass(enum.Enum):
    ONLY_NEW = "OnlyNew"
    ONLY_MSS = "OnlyMSS"
    BOTH = "Both"
    NEITHER = "Neither"


def compare_mss(inst: Instance) -> MssClass:
    """Classify against the older sufficient condition floor(s**(1/n)) >= m + 1."""
    _require_n_ge_2(inst.n, "compare_mss")
    mss = root_data(inst.s, inst.n).k >= inst.m + 1
    new = demailly_condition(inst)
    if mss and new:
        return MssClass.BOTH
    if new:
        return MssClass.ONLY_NEW
    if mss:
        return MssClass.ONLY_MSS
    return MssClass.NEITHER


@dataclass
class BoundReport:
    instance: Instance
    delta: int
    k_bound: int | None = None
    condition_holds: bool | None = None
    sufficient_holds: bool | None = None
    factor_results: list[tuple[int, bool]] = field(default_factory=list)
    mss_comparison: MssClass | None = None


def bound_report(inst: Instance) -> BoundReport:
    report = BoundReport(instance=inst, delta=delta_bound(inst))
    if inst.n == 1:
        return report
    report.k_bound = k_bound(inst)
    report.condition_holds = demailly_condition(inst)
    report.sufficient_holds = sufficient_condition(inst)
    report.factor_results = [
        (i, factor_inequality(inst, i)) for i in range((inst.n - 1) // 2 + 1)
    ]
    report.mss_comparison = compare_mss(inst)
    return report


# --- proof certificate over theta = s**(1/n) ------------------------------


@dataclass
class Certificate:
    instance: Instance
    k: int
    # (u, n') with s**(1/n) = u**(1/n') and x**n' - u irreducible; all
    # expressions below live in Q[theta]/(theta**n' - u)
    radical: tuple[int, int]
    A: AlgebraicExpr
    B: AlgebraicExpr
    C_list: list[AlgebraicExpr]
    C_min: AlgebraicExpr
    f: AlgebraicExpr | None = None
    g: AlgebraicExpr | None = None
    df_deps: AlgebraicExpr | None = None
    dg_deps: AlgebraicExpr | None = None
    boundary_m: AlgebraicExpr | None = None
    boundary_identity_holds: bool | None = None
    signs: dict[str, Sign] = field(default_factory=dict)

    @property
    def indeterminate(self) -> list[str]:
        return [name for name, sg in self.signs.items() if sg is Sign.INDETERMINATE]

    def expected_signs_hold(self) -> bool:
        """A <= 0, C_min > 0 and (for eps > 0) f, g > 0 with negative eps-slopes."""
        ok = self.signs["A"] in (Sign.ZERO, Sign.NEGATIVE)
        ok &= self.signs["C_min"] is Sign.POSITIVE
        for name in ("f", "g"):
            if name in self.signs:
                ok &= self.signs[name] is Sign.POSITIVE
        for name in ("df_deps", "dg_deps"):
            if name in self.signs:
                ok &= self.signs[name] is Sign.NEGATIVE
        return bool(ok)


@lru_cache(maxsize=1024)
def _certificate_parts(n: int, s: int, max_bits: int):
    k = root_data(s, n).k
    # work over the irreducible form of the radical so that rational
    # theta (perfect powers) collapses to constants
    u, n_red = perfect_power_reduction(s, n)
    theta = AlgebraicExpr.theta(u, n_red)
    one = AlgebraicExpr.constant(u, n_red, 1)
    eps = theta - k
    N = n - 1
    theta2 = theta * theta

    A = k * k - theta2
    B = N * (k * k - (1 + 2 * eps) * k - eps * eps) + 2 * k
    tail = (k * N + 1) * ((k - 1) * N + 1)
    C_list = [(theta2 - 1) * (i * i) - N * (theta2 - 1) * i + tail for i in range((n - 1) // 2 + 1)]
    half = Fraction(1, 2)
    left = Fraction((2 * k - 1) * N, 2) + 1
    right = theta * (N * half)
    C_min = left * left * one - right * right

    parts = dict(k=k, radical=(u, n_red), A=A, B=B, C_list=C_list, C_min=C_min)
    signs = {
        "A": ae_sign(A, max_bits),
        "C_min": ae_sign(C_min, max_bits),
    }
    if k**n != s:
        inv = AlgebraicExpr.inverse_theta_minus(u, n_red, k)
        inv2 = inv * inv
        kk = k * k
        f = (inv * half - half) * kk + (-inv + 2 - eps) * k - (3 - eps) * (1 - eps) * Fraction(1, 4)
        g = (inv - 1) * kk + (-2 * inv + 5 - 3 * eps) * k - (1 - eps) * (1 - eps)
        df = -inv2 * half * kk + (inv2 - 1) * k - (-4 + 2 * eps) * Fraction(1, 4)
        dg = -inv2 * kk + (2 * inv2 - 3) * k + 2 * (1 - eps)
        bm = inv * Fraction(N * (k - 2), 2) + 1
        q_at_boundary = A * (bm * bm) + B * bm + C_min
        identity = f * (N * N) + g * N + 2 * k * (1 - eps) + (1 - eps * eps)
        parts.update(
            f=f, g=g, df_deps=df, dg_deps=dg, boundary_m=bm,
            boundary_identity_holds=(q_at_boundary - identity).is_zero_vector(),
        )
        signs["f"] = ae_sign(f, max_bits)
        signs["g"] = ae_sign(g, max_bits)
        signs["df_deps"] = ae_sign(df, max_bits)
        signs["dg_deps"] = ae_sign(dg, max_bits)
    parts["signs"] = signs
    return parts


def certificate(inst: Instance, max_precision_bits: int = 4096) -> Certificate:
    """Coefficients of the per-factor quadratic in m, expressed over theta.

    LHS - RHS of the i-th factor inequality equals A m^2 + B m + C_i.  For
    eps > 0 the certificate also carries f, g (the coefficients after
    substituting the boundary value of m), their eps-derivatives, and a
    check that the substitution identity holds exactly.
    """
    _require_n_ge_2(inst.n, "certificate")
    parts = _certificate_parts(inst.n, inst.s, max_precision_bits)
    return Certificate(
        instance=inst,
        k=parts["k"],
        radical=parts["radical"],
        A=parts["A"],
        B=parts["B"],
        C_list=list(parts["C_list"]),
        C_min=parts["C_min"],
        f=parts.get("f"),
        g=parts.get("g"),
        df_deps=parts.get("df_deps"),
        dg_deps=parts.get("dg_deps"),
        boundary_m=parts.get("boundary_m"),
        boundary_identity_holds=parts.get("boundary_identity_holds"),
        signs=dict(parts["signs"]),
    )
