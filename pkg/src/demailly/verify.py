"""Experiments linking the arithmetic bounds to computed alphas.

Nothing here claims anything about the Waldschmidt constant itself; the
reports only say which finite bound was confirmed for which point set.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .bounds import (
    Instance,
    MssClass,
    compare_mss,
    delta_bound,
    demailly_condition,
    factor_inequality,
    k_bound,
    root_data,
    sufficient_condition,
)
from .interpolation import (
    DEFAULT_PRIME,
    PointSet,
    alpha_of,
    build_matrix,
    has_kernel,
    rank_gf,
    sample_points,
)

__all__ = [
    "ChudnovskyReport",
    "ExperimentReport",
    "GridCell",
    "InvariantReport",
    "SweepRow",
    "SweepSummary",
    "chudnovsky_report",
    "empirical_grid",
    "invariant_suite",
    "report_from_alpha",
    "run_instance",
    "summarize_sweep",
    "theorem_sweep",
]


@dataclass
class ExperimentReport:
    instance: Instance
    seed: int | None
    prime: int
    alpha: int
    delta: int
    k: int
    k_bound: int | None
    condition_holds: bool | None
    demailly_ratio: Fraction
    thm_a_ok: bool
    thm_b_ok: bool | None
    ratio_le_k: bool
    ranks: list[tuple[int, int]] = field(default_factory=list)


def report_from_alpha(
    inst: Instance, alpha: int, prime: int, seed: int | None, ranks=()
) -> ExperimentReport:
    n, m = inst.n, inst.m
    delta = delta_bound(inst)
    k = root_data(inst.s, n).k
    kb = cond = thm_b = None
    if n >= 2:
        kb = k_bound(inst)
        cond = demailly_condition(inst)
        if cond:
            thm_b = alpha <= kb
    return ExperimentReport(
        instance=inst,
        seed=seed,
        prime=prime,
        alpha=alpha,
        delta=delta,
        k=k,
        k_bound=kb,
        condition_holds=cond,
        demailly_ratio=Fraction(alpha + n - 1, m + n - 1),
        thm_a_ok=alpha <= delta,
        thm_b_ok=thm_b,
        ratio_le_k=(alpha + n - 1) <= k * (m + n - 1),
        ranks=list(ranks),
    )


def run_instance(
    n: int, s: int, m: int, prime: int = DEFAULT_PRIME, seed: int = 0,
    points: PointSet | None = None,
) -> ExperimentReport:
    """Sample s points (or use ``points``), compute alpha(I^(m)) and check both bounds."""
    if points is None:
        points = sample_points(n, s, prime, seed)
    else:
        n, s, prime, seed = points.n, points.s, points.p, None
    inst = Instance(n, s, m)
    res = alpha_of(points, m)
    return report_from_alpha(inst, res.alpha, prime, seed, res.ranks)


@dataclass
class InvariantReport:
    checks: dict[str, bool]
    alphas: list[int]
    counterexample: str | None = None

    @property
    def passed(self) -> bool:
        return self.counterexample is None


def invariant_suite(
    points: PointSet, M: int, cap: int | None = None, seed: int = 0,
    alphas: Sequence[int] | None = None,
) -> InvariantReport:
    """Check the structural properties of m -> alpha(m) for one point set.

    Covers monotonicity in m, subadditivity, alpha(m) <= m alpha(1),
    alpha(m) <= delta, kernel persistence one degree above alpha, and rank
    invariance under row permutation and nonzero row scaling.  ``alphas``
    may be passed to reuse already computed values for m = 1..M.
    """
    if M < 2:
        raise ValueError("invariant suite needs M >= 2")
    n, s, p = points.n, points.s, points.p
    if alphas is None:
        alphas = [alpha_of(points, m, cap).alpha for m in range(1, M + 1)]
    alphas = list(alphas)
    if len(alphas) != M:
        raise ValueError(f"expected {M} alphas, got {len(alphas)}")
    a = {m: alphas[m - 1] for m in range(1, M + 1)}
    checks: dict[str, bool] = {}
    first: str | None = None

    def record(name: str, ok: bool, detail: str) -> None:
        nonlocal first
        checks[name] = checks.get(name, True) and ok
        if not ok and first is None:
            first = f"{name}: {detail}"

    for m in range(1, M):
        record("monotone_in_m", a[m + 1] >= a[m], f"alpha({m + 1})={a[m + 1]} < alpha({m})={a[m]}")
    for x, y in itertools.combinations_with_replacement(range(1, M + 1), 2):
        if x + y <= M:
            record("subadditive", a[x + y] <= a[x] + a[y],
                   f"alpha({x + y})={a[x + y]} > alpha({x})+alpha({y})")
    for m in range(1, M + 1):
        record("le_m_alpha1", a[m] <= m * a[1], f"alpha({m})={a[m]} > {m}*{a[1]}")
        delta = delta_bound(Instance(n, s, m))
        record("le_delta", a[m] <= delta, f"alpha({m})={a[m]} > delta={delta}")

    rng = np.random.default_rng(seed)
    for m in range(1, M + 1):
        record("kernel_degree_monotone", has_kernel(points, m, a[m] + 1),
               f"no kernel at d={a[m] + 1} for m={m}")
        mat = build_matrix(points, m, a[m])
        base = rank_gf(mat)
        perm = rng.permutation(mat.shape[0])
        scales = rng.integers(1, min(p, 1 << 62), size=mat.shape[0])
        scaled = [[int(v) * int(c) % p for v in row] for row, c in zip(mat.data[perm], scales[perm])]
        record("rank_permutation", rank_gf(mat.data[perm], p) == base, f"m={m}, d={a[m]}")
        record("rank_row_scaling", rank_gf(scaled, p) == base, f"m={m}, d={a[m]}")
    return InvariantReport(checks=checks, alphas=alphas, counterexample=first)


@dataclass(frozen=True)
class SweepRow:
    n: int
    s: int
    m: int
    condition_holds: bool
    sufficient_holds: bool
    factor_ok: bool
    mss_class: MssClass

    @property
    def violation(self) -> bool:
        return self.condition_holds and not (self.sufficient_holds and self.factor_ok)


def _sweep_cell(args: tuple[int, int, int]) -> list[SweepRow]:
    n, s, m_max = args
    rows = []
    for m in range(1, m_max + 1):
        inst = Instance(n, s, m)
        rows.append(SweepRow(
            n=n, s=s, m=m,
            condition_holds=demailly_condition(inst),
            sufficient_holds=sufficient_condition(inst),
            factor_ok=all(factor_inequality(inst, i) for i in range((n - 1) // 2 + 1)),
            mss_class=compare_mss(inst),
        ))
    return rows


def theorem_sweep(
    n_range: Iterable[int], s_max: int, m_max: int, workers: int = 1
) -> Iterator[SweepRow]:
    """Stream exact rows for every (n, s, m) in the grid, sorted by (n, s, m).

    With ``workers > 1`` cells are computed in worker processes; the output
    order is the same as the sequential one.
    """
    ns = sorted(set(n_range))
    if not ns or s_max < 1 or m_max < 1:
        raise ValueError("sweep ranges must be nonempty")
    if ns[0] < 2:
        raise ValueError("sweep requires n >= 2")
    cells = ((n, s, m_max) for n in ns for s in range(1, s_max + 1))
    if workers <= 1:
        for cell in cells:
            yield from _sweep_cell(cell)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for rows in pool.map(_sweep_cell, cells, chunksize=64):
            yield from rows


@dataclass
class SweepSummary:
    rows: int = 0
    condition_true: int = 0
    violations: list[SweepRow] = field(default_factory=list)
    # all factor inequalities hold but the binomial inequality fails
    product_gaps: list[SweepRow] = field(default_factory=list)
    mss_counts: dict[str, int] = field(default_factory=lambda: {c.value: 0 for c in MssClass})


def summarize_sweep(rows: Iterable[SweepRow]) -> SweepSummary:
    out = SweepSummary()
    for row in rows:
        out.rows += 1
        out.condition_true += row.condition_holds
        out.mss_counts[row.mss_class.value] += 1
        if row.violation:
            out.violations.append(row)
        if row.factor_ok and not row.sufficient_holds:
            out.product_gaps.append(row)
    return out


@dataclass
class ChudnovskyReport:
    n: int
    s: int
    alpha: int
    k: int
    ratio: Fraction
    flag: bool


def chudnovsky_report(points: PointSet) -> ChudnovskyReport:
    """(alpha(I) + n - 1)/n and whether alpha(I) + n - 1 <= k n."""
    n, s = points.n, points.s
    alpha = alpha_of(points, 1).alpha
    k = root_data(s, n).k
    return ChudnovskyReport(
        n=n, s=s, alpha=alpha, k=k,
        ratio=Fraction(alpha + n - 1, n),
        flag=alpha + n - 1 <= k * n,
    )


@dataclass
class GridCell:
    n: int
    s: int
    seed: int
    reports: list[ExperimentReport]
    invariants: InvariantReport | None


def _grid_cell(args) -> GridCell:
    n, s, seed, m_max, prime, with_invariants = args
    points = sample_points(n, s, prime, seed)
    reports = []
    for m in range(1, m_max + 1):
        res = alpha_of(points, m)
        reports.append(report_from_alpha(Instance(n, s, m), res.alpha, prime, seed, res.ranks))
    inv = None
    if with_invariants and m_max >= 2:
        inv = invariant_suite(points, m_max, seed=seed, alphas=[r.alpha for r in reports])
    return GridCell(n=n, s=s, seed=seed, reports=reports, invariants=inv)


def empirical_grid(
    n_values: Iterable[int], s_values: Iterable[int], m_max: int, seeds: Iterable[int],
    prime: int = DEFAULT_PRIME, with_invariants: bool = True, workers: int = 1,
) -> Iterator[GridCell]:
    """alpha(m) for m = 1..m_max on sampled point sets, one cell per (n, s, seed)."""
    cells = [(n, s, seed, m_max, prime, with_invariants)
             for n in sorted(set(n_values)) for s in sorted(set(s_values))
             for seed in sorted(set(seeds))]
    if workers <= 1:
        yield from map(_grid_cell, cells)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(_grid_cell, cells)
