"""Fat-point interpolation over GF(p).

A homogeneous polynomial of degree d vanishes to order >= m at an affine
point q (chart x0 = 1) iff every coefficient of y^beta with |beta| < m in
F(1, q + y) is zero.  For the monomial x0^a0 x1^a1 ... xn^an that
coefficient is prod_i C(a_i, beta_i) q_i^(a_i - beta_i), which is valid in
every characteristic.  Stacking these rows over all points gives the
condition matrix; alpha is the least d whose matrix has a nonzero kernel.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .bounds import Instance, delta_bound, k_bound
from .exactnum import binomial

__all__ = [
    "AlphaResult",
    "CapExceeded",
    "ConditionMatrix",
    "DEFAULT_PRIME",
    "PointSet",
    "ProjectivePoint",
    "alpha_of",
    "build_matrix",
    "condition_rows",
    "default_cap",
    "dump_points",
    "has_kernel",
    "is_prime",
    "load_points",
    "monomial_basis",
    "multi_indices",
    "rank_gf",
    "sample_points",
    "splitmix64",
    "waldschmidt_sequence",
]

DEFAULT_PRIME = 2147483647
_MASK64 = (1 << 64) - 1
# products of two residues must fit in int64
_INT64_SAFE_PRIME = 1 << 31


class CapExceeded(RuntimeError):
    """No kernel found at any degree up to the cap."""


def is_prime(p: int) -> bool:
    """Deterministic Miller-Rabin, exact for p < 3.3e24 and far beyond in practice."""
    if p < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if p % q == 0:
            return p == q
    d, r = p - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in small:
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(r - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class ProjectivePoint:
    coords: tuple[int, ...]

    @property
    def affine(self) -> tuple[int, ...]:
        return self.coords[1:]


@dataclass(frozen=True)
class PointSet:
    n: int
    p: int
    points: tuple[ProjectivePoint, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.p < 3 or not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not a prime >= 3")
        seen = set()
        for pt in self.points:
            c = pt.coords
            if len(c) != self.n + 1:
                raise ValueError(f"point {c} does not live in P^{self.n}")
            if c[0] != 1:
                raise ValueError(f"point {c} is not normalized to x0 = 1")
            if any(not 0 <= x < self.p for x in c):
                raise ValueError(f"point {c} has entries not reduced mod {self.p}")
            if c in seen:
                raise ValueError(f"duplicate point {c}")
            seen.add(c)

    @classmethod
    def from_affine(cls, n: int, p: int, affine: Sequence[Sequence[int]]) -> "PointSet":
        pts = tuple(ProjectivePoint((1, *(int(x) % p for x in a))) for a in affine)
        return cls(n, p, pts)

    @property
    def s(self) -> int:
        return len(self.points)


def splitmix64(seed: int) -> Iterator[int]:
    state = seed & _MASK64
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        yield z ^ (z >> 31)


def _uniform_mod(stream: Iterator[int], p: int) -> int:
    limit = ((1 << 64) // p) * p
    while True:
        x = next(stream)
        if x < limit:
            return x % p


def sample_points(n: int, s: int, prime: int = DEFAULT_PRIME, seed: int = 0) -> PointSet:
    """s distinct random points of the affine chart x0 = 1, deterministic in seed.

    A point that collides with an earlier one is discarded and redrawn whole.
    """
    if n < 1 or s < 1:
        raise ValueError("need n >= 1 and s >= 1")
    if prime**n < s:
        raise ValueError(f"GF({prime})^{n} has fewer than {s} points")
    stream = splitmix64(seed)
    seen: set[tuple[int, ...]] = set()
    pts = []
    while len(pts) < s:
        c = (1, *(_uniform_mod(stream, prime) for _ in range(n)))
        if c in seen:
            continue
        seen.add(c)
        pts.append(ProjectivePoint(c))
    return PointSet(n, prime, tuple(pts))


def _compositions_desc(length: int, total: int) -> Iterator[tuple[int, ...]]:
    """Vectors of given length summing to total, lexicographically descending."""
    if length == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions_desc(length - 1, total - first):
            yield (first, *rest)


@lru_cache(maxsize=256)
def monomial_basis(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of degree-d monomials in x0..xn, graded lex with x0 > ... > xn."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    return tuple(_compositions_desc(n + 1, d))


@lru_cache(maxsize=256)
def multi_indices(n: int, max_order: int) -> tuple[tuple[int, ...], ...]:
    """All beta in N^n with |beta| <= max_order, graded lex."""
    out: list[tuple[int, ...]] = []
    for deg in range(max_order + 1):
        out.extend(_compositions_desc(n, deg))
    return tuple(out)


def _dtype_for(p: int):
    return np.int64 if p < _INT64_SAFE_PRIME else object


def _hasse_table(x: int, d: int, max_beta: int, p: int) -> np.ndarray:
    """table[b, a] = C(a, b) * x^(a-b) mod p for 0 <= b <= max_beta, 0 <= a <= d."""
    table = np.zeros((max_beta + 1, d + 1), dtype=_dtype_for(p))
    for b in range(max_beta + 1):
        for a in range(b, d + 1):
            table[b, a] = binomial(a, b) % p * pow(x, a - b, p) % p
    return table


def _rows_array(point: ProjectivePoint, m: int, d: int, basis, p: int) -> np.ndarray:
    n = len(point.coords) - 1
    betas = np.array(multi_indices(n, m - 1), dtype=np.int64).reshape(-1, n)
    expo = np.array(basis, dtype=np.int64).reshape(-1, n + 1)
    block = np.ones((betas.shape[0], expo.shape[0]), dtype=_dtype_for(p))
    for i, x in enumerate(point.affine, start=1):
        table = _hasse_table(x, d, m - 1, p)
        block = block * table[np.ix_(betas[:, i - 1], expo[:, i])] % p
    return block


def condition_rows(
    point: ProjectivePoint, m: int, d: int, basis=None, p: int = DEFAULT_PRIME
) -> list[list[int]]:
    """Order-m vanishing conditions at one point, one row per beta with |beta| < m."""
    if m < 1 or d < 0:
        raise ValueError("need m >= 1 and d >= 0")
    if basis is None:
        basis = monomial_basis(len(point.coords) - 1, d)
    return [[int(v) for v in row] for row in _rows_array(point, m, d, basis, p)]


@dataclass
class ConditionMatrix:
    data: np.ndarray
    p: int
    m: int
    d: int

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape


def build_matrix(points: PointSet, m: int, d: int) -> ConditionMatrix:
    basis = monomial_basis(points.n, d)
    rows_per_point = binomial(m - 1 + points.n, points.n)
    blocks = [_rows_array(pt, m, d, basis, points.p) for pt in points.points]
    data = np.vstack(blocks) if blocks else np.zeros((0, len(basis)), dtype=_dtype_for(points.p))
    assert data.shape == (rows_per_point * points.s, len(basis))
    return ConditionMatrix(data=data, p=points.p, m=m, d=d)


def rank_gf(matrix, p: int | None = None) -> int:
    """Rank over GF(p) by Gaussian elimination with modular inverses.

    ``matrix`` is a ConditionMatrix (which carries p) or any 2-D integer
    array together with ``p``.  The input is not modified.
    """
    if isinstance(matrix, ConditionMatrix):
        p = matrix.p if p is None else p
        matrix = matrix.data
    if p is None:
        raise ValueError("modulus required")
    M = np.array(matrix, dtype=_dtype_for(p))
    if M.ndim != 2 or M.size == 0:
        return 0
    M %= p
    rows, cols = M.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        inv = pow(int(M[r, c]), -1, p)
        M[r, c:] = M[r, c:] * inv % p
        below = np.flatnonzero(M[r + 1 :, c]) + r + 1
        if below.size:
            factors = M[below, c].reshape(-1, 1)
            M[below, c:] = (M[below, c:] - factors * M[r, c:] % p) % p
        r += 1
    return r


def has_kernel(points: PointSet, m: int, d: int) -> bool:
    """Whether some nonzero degree-d form vanishes to order m at all points."""
    return rank_gf(build_matrix(points, m, d)) < binomial(d + points.n, points.n)


@dataclass
class AlphaResult:
    alpha: int
    ranks: list[tuple[int, int]] = field(default_factory=list)


def default_cap(n: int, s: int, m: int) -> int:
    """max(k(m+n-1) - n + 1 + n, delta): never below the unconditional bound."""
    inst = Instance(n, s, m)
    return max(k_bound(inst) + n, delta_bound(inst))


def alpha_of(points: PointSet, m: int, cap: int | None = None) -> AlphaResult:
    """Least degree d >= 1 with a nonzero form vanishing to order m at every point."""
    if m < 1:
        raise ValueError("multiplicity must be >= 1")
    if cap is None:
        cap = default_cap(points.n, points.s, m)
    if cap < 1:
        raise ValueError("cap must be >= 1")
    ranks = []
    for d in range(1, cap + 1):
        mat = build_matrix(points, m, d)
        rk = rank_gf(mat)
        ranks.append((d, rk))
        if rk < mat.shape[1]:
            return AlphaResult(alpha=d, ranks=ranks)
    raise CapExceeded(f"no form of degree <= {cap} vanishes to order {m} at the {points.s} points")


def waldschmidt_sequence(
    points: PointSet, M: int, cap: int | None = None
) -> list[tuple[int, int, Fraction]]:
    """(m, alpha(m), alpha(m)/m) for m = 1..M."""
    if M < 1:
        raise ValueError("M must be >= 1")
    out = []
    for m in range(1, M + 1):
        a = alpha_of(points, m, cap).alpha
        out.append((m, a, Fraction(a, m)))
    return out


# --- text format: "n s p" header, then one line of n affine coordinates per point


def dump_points(points: PointSet) -> str:
    buf = io.StringIO()
    buf.write(f"{points.n} {points.s} {points.p}\n")
    for pt in points.points:
        buf.write(" ".join(str(x) for x in pt.affine) + "\n")
    return buf.getvalue()


def load_points(source: str | os.PathLike | io.TextIOBase) -> PointSet:
    """Parse the point-set text format from a path, file object or string."""
    if hasattr(source, "read"):
        text = source.read()
    elif isinstance(source, str) and "\n" in source:
        text = source
    else:
        with open(source) as fh:
            text = fh.read()
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 3:
        raise ValueError("point file must start with a 'n s p' header")
    n, s, p = (int(x) for x in lines[0])
    body = lines[1:]
    if len(body) != s:
        raise ValueError(f"header declares {s} points, found {len(body)}")
    for row in body:
        if len(row) != n:
            raise ValueError(f"expected {n} coordinates per point, got {row}")
    return PointSet.from_affine(n, p, [[int(x) for x in row] for row in body])
