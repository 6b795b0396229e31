"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 cap exceeded or indeterminate
sign, 3 invariant violation (a software fault, since the checked bounds
are theorems).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import __version__
from .bounds import (
    Instance,
    MaxMKind,
    UnsupportedDimension,
    bound_report,
    certificate,
    compare_mss,
    demailly_condition,
    max_m,
    root_data,
)
from .exactnum import AlgebraicExpr
from .interpolation import (
    DEFAULT_PRIME,
    CapExceeded,
    PointSet,
    alpha_of,
    dump_points,
    is_prime,
    load_points,
    sample_points,
    waldschmidt_sequence,
)
from .verify import (
    chudnovsky_report,
    empirical_grid,
    invariant_suite,
    run_instance,
    summarize_sweep,
    theorem_sweep,
)

EXIT_OK, EXIT_USAGE, EXIT_CAP, EXIT_FAULT = 0, 1, 2, 3

SWEEP_CSV_COLUMNS = ["n", "s", "m", "condition_holds", "sufficient_holds", "factor_ok", "mss_class", "violation"]
GRID_CSV_COLUMNS = ["n", "s", "seed", "m", "alpha", "delta", "k_bound", "condition_holds",
                    "demailly_ratio", "thm_a_ok", "thm_b_ok", "ratio_le_k"]

EPILOG = f"""\
CSV columns:
  sweep      {",".join(SWEEP_CSV_COLUMNS)}
  grid       {",".join(GRID_CSV_COLUMNS)}
  sequence   m,alpha,ratio
  others     key,value (flattened results then verdicts)

exit codes: 0 ok, 1 usage error, 2 cap exceeded / indeterminate sign,
3 invariant violation (software fault)
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _jsonable(v: Any) -> Any:
    """Numbers become decimal strings; containers are converted recursively."""
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, AlgebraicExpr):
        return [str(c) for c in v.coeffs]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "value"):  # enums
        return v.value
    return str(v)


def _flatten(prefix: str, v: Any, out: list[tuple[str, str]]) -> None:
    if isinstance(v, dict):
        for k, x in v.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), x, out)
    elif isinstance(v, list) and v and isinstance(v[0], (dict, list)):
        for i, x in enumerate(v):
            _flatten(f"{prefix}[{i}]", x, out)
    elif isinstance(v, list):
        out.append((prefix, " ".join("null" if x is None else str(x).lower() if isinstance(x, bool) else str(x) for x in v)))
    elif v is None:
        out.append((prefix, ""))
    elif isinstance(v, bool):
        out.append((prefix, "true" if v else "false"))
    else:
        out.append((prefix, str(v)))


def _emit(args, command: str, inputs: dict, results: dict, verdicts: dict, text: str | None = None) -> None:
    doc = {
        "command": command,
        "inputs": _jsonable(inputs),
        "results": _jsonable(results),
        "verdicts": _jsonable(verdicts),
        "version": __version__,
    }
    out = sys.stdout
    if args.format == "json":
        json.dump(doc, out, sort_keys=True, indent=2)
        out.write("\n")
    elif args.format == "csv":
        rows: list[tuple[str, str]] = []
        _flatten("inputs", doc["inputs"], rows)
        _flatten("results", doc["results"], rows)
        _flatten("verdicts", doc["verdicts"], rows)
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["key", "value"])
        w.writerows(rows)
    else:
        if text is None:
            rows = []
            _flatten("", doc["results"], rows)
            _flatten("", doc["verdicts"], rows)
            text = "\n".join(f"{k}: {v}" for k, v in rows)
        out.write(text + "\n")


def _points_from_args(args) -> PointSet:
    if getattr(args, "points_file", None):
        pts = load_points(args.points_file)
        return pts
    if args.n is None or args.s is None:
        raise UsageError("--n and --s are required unless --points-file is given")
    return sample_points(args.n, args.s, args.prime, args.seed)


def _point_inputs(args, pts: PointSet) -> dict:
    d = {"n": pts.n, "s": pts.s, "prime": pts.p}
    if getattr(args, "points_file", None):
        d["points_file"] = args.points_file
    else:
        d["seed"] = args.seed
    return d


# --- commands ---------------------------------------------------------------


def cmd_bounds(args) -> int:
    inst = Instance(args.n, args.s, args.m)
    rep = bound_report(inst)
    rd = root_data(inst.s, inst.n)
    results = {
        "k": rd.k,
        "epsilon_is_zero": rd.epsilon_is_zero,
        "delta": rep.delta,
        "k_bound": rep.k_bound,
        "condition": rep.condition_holds,
        "sufficient": rep.sufficient_holds,
        "factors": [{"i": i, "holds": ok} for i, ok in rep.factor_results],
        "mss_comparison": rep.mss_comparison,
    }
    verdicts: dict[str, Any] = {}
    if inst.n >= 2:
        chain_ok = not rep.condition_holds or (
            rep.sufficient_holds and all(ok for _, ok in rep.factor_results))
        verdicts["part_b_applies"] = rep.condition_holds
        verdicts["chain_consistent"] = chain_ok
    _emit(args, "bounds", {"n": inst.n, "s": inst.s, "m": inst.m}, results, verdicts)
    if inst.n >= 2 and not verdicts["chain_consistent"]:
        return EXIT_FAULT
    return EXIT_OK


def cmd_max_m(args) -> int:
    res = max_m(args.n, args.s)
    results: dict[str, Any] = {"kind": res.kind, "m_max": res.m_max}
    if res.kind is MaxMKind.BOUNDED:
        for label, cmp in (("at_m_max", res.last_true), ("at_m_max_plus_1", res.first_false)):
            results[label] = {"a": cmp.a, "b": cmp.b, "a_pow_n": cmp.lhs,
                              "b_pow_n_times_s": cmp.rhs, "ordering": cmp.ordering.name}
    _emit(args, "max-m", {"n": args.n, "s": args.s}, results, {}, text=str(res))
    return EXIT_OK


def cmd_alpha(args) -> int:
    pts = _points_from_args(args)
    if args.m is None:
        raise UsageError("--m is required")
    res = alpha_of(pts, args.m, args.cap)
    results = {"alpha": res.alpha, "ranks": [{"d": d, "rank": r} for d, r in res.ranks]}
    _emit(args, "alpha", {**_point_inputs(args, pts), "m": args.m, "cap": args.cap},
          results, {}, text=str(res.alpha))
    return EXIT_OK


def cmd_sequence(args) -> int:
    pts = _points_from_args(args)
    seq = waldschmidt_sequence(pts, args.max_mult, args.cap)
    chud = chudnovsky_report(pts)
    results = {
        "sequence": [{"m": m, "alpha": a, "ratio": r} for m, a, r in seq],
        "min_ratio": min(r for _, _, r in seq),
        "chudnovsky": {"alpha": chud.alpha, "k": chud.k, "ratio": chud.ratio},
    }
    verdicts: dict[str, Any] = {"chudnovsky_le_k": chud.flag}
    code = EXIT_OK
    if args.max_mult >= 2:
        inv = invariant_suite(pts, args.max_mult, args.cap, alphas=[a for _, a, _ in seq])
        verdicts["invariants"] = inv.checks
        verdicts["counterexample"] = inv.counterexample
        if not inv.passed:
            code = EXIT_FAULT
    if args.format == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["m", "alpha", "ratio"])
        for m, a, r in seq:
            w.writerow([m, a, r])
        return code
    text = "\n".join(f"m={m} alpha={a} ratio={r}" for m, a, r in seq)
    _emit(args, "sequence", {**_point_inputs(args, pts), "max_mult": args.max_mult},
          results, verdicts, text=text)
    return code


def cmd_verify(args) -> int:
    pts = _points_from_args(args)
    if args.m is None:
        raise UsageError("--m is required")
    rep = run_instance(pts.n, pts.s, args.m, pts.p, args.seed, points=pts)
    results = {
        "alpha": rep.alpha, "delta": rep.delta, "k": rep.k, "k_bound": rep.k_bound,
        "condition": rep.condition_holds, "demailly_ratio": rep.demailly_ratio,
        "ranks": [{"d": d, "rank": r} for d, r in rep.ranks],
    }
    verdicts = {"thm_a_ok": rep.thm_a_ok, "thm_b_ok": rep.thm_b_ok, "ratio_le_k": rep.ratio_le_k}
    _emit(args, "verify", {**_point_inputs(args, pts), "m": args.m}, results, verdicts)
    if not rep.thm_a_ok or rep.thm_b_ok is False:
        print("invariant violation: a proven bound failed; this is a software fault",
              file=sys.stderr)
        return EXIT_FAULT
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.n_min > args.n_max:
        raise UsageError("--n-min must not exceed --n-max")
    rows = theorem_sweep(range(args.n_min, args.n_max + 1), args.s_max, args.m_max,
                         workers=args.threads)
    if args.format == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(SWEEP_CSV_COLUMNS)
        violations = 0
        for r in rows:
            violations += r.violation
            w.writerow([r.n, r.s, r.m, str(r.condition_holds).lower(),
                        str(r.sufficient_holds).lower(), str(r.factor_ok).lower(),
                        r.mss_class.value, str(r.violation).lower()])
        return EXIT_FAULT if violations else EXIT_OK
    summ = summarize_sweep(rows)
    results = {
        "rows": summ.rows,
        "condition_true": summ.condition_true,
        "violations": len(summ.violations),
        "product_gaps": len(summ.product_gaps),
        "mss_counts": summ.mss_counts,
        "violation_rows": [[r.n, r.s, r.m] for r in summ.violations],
    }
    verdicts = {"no_violations": not summ.violations}
    text = (f"rows: {summ.rows}\ncondition_true: {summ.condition_true}\n"
            f"violations: {len(summ.violations)}")
    _emit(args, "sweep", {"n_min": args.n_min, "n_max": args.n_max, "s_max": args.s_max,
                          "m_max": args.m_max}, results, verdicts, text=text)
    return EXIT_FAULT if summ.violations else EXIT_OK


def cmd_certificate(args) -> int:
    inst = Instance(args.n, args.s, args.m)
    cert = certificate(inst, args.max_bits)
    results = {
        "k": cert.k,
        "basis": f"coefficients of 1, theta, ..., theta^{inst.n - 1} with theta = {inst.s}^(1/{inst.n})",
        "A": cert.A, "B": cert.B, "C": cert.C_list, "C_min": cert.C_min,
        "f": cert.f, "g": cert.g, "df_deps": cert.df_deps, "dg_deps": cert.dg_deps,
        "boundary_m": cert.boundary_m,
        "boundary_identity_holds": cert.boundary_identity_holds,
        "signs": {k: v.value for k, v in cert.signs.items()},
    }
    verdicts = {"expected_signs": cert.expected_signs_hold() if cert.k >= 2 else None,
                "indeterminate": cert.indeterminate}
    _emit(args, "certificate", {"n": inst.n, "s": inst.s, "m": inst.m}, results, verdicts)
    return EXIT_CAP if cert.indeterminate else EXIT_OK


def cmd_compare(args) -> int:
    inst = Instance(args.n, args.s, args.m)
    cls = compare_mss(inst)
    results = {"k": root_data(inst.s, inst.n).k, "mss_condition": root_data(inst.s, inst.n).k >= inst.m + 1,
               "new_condition": demailly_condition(inst), "class": cls}
    _emit(args, "compare", {"n": inst.n, "s": inst.s, "m": inst.m}, results, {}, text=cls.value)
    return EXIT_OK


def cmd_points(args) -> int:
    pts = sample_points(args.n, args.s, args.prime, args.seed)
    sys.stdout.write(dump_points(pts))
    return EXIT_OK


def cmd_grid(args) -> int:
    seeds = [int(x) for x in args.seeds.split(",")]
    ns = [int(x) for x in args.n_values.split(",")]
    cells = empirical_grid(ns, range(1, args.s_max + 1), args.m_max, seeds, args.prime,
                           with_invariants=args.m_max >= 2, workers=args.threads)
    total = a_ok = b_total = b_ok = 0
    inv_fail: list[str] = []
    w = csv.writer(sys.stdout, lineterminator="\n") if args.format == "csv" else None
    if w:
        w.writerow(GRID_CSV_COLUMNS)
    for cell in cells:
        for r in cell.reports:
            total += 1
            a_ok += r.thm_a_ok
            if r.condition_holds:
                b_total += 1
                b_ok += bool(r.thm_b_ok)
            if w:
                w.writerow([r.instance.n, r.instance.s, cell.seed, r.instance.m, r.alpha, r.delta,
                            "" if r.k_bound is None else r.k_bound,
                            "" if r.condition_holds is None else str(r.condition_holds).lower(),
                            r.demailly_ratio, str(r.thm_a_ok).lower(),
                            "" if r.thm_b_ok is None else str(r.thm_b_ok).lower(),
                            str(r.ratio_le_k).lower()])
        if cell.invariants is not None and not cell.invariants.passed:
            inv_fail.append(f"n={cell.n} s={cell.s} seed={cell.seed}: {cell.invariants.counterexample}")
    ok = a_ok == total and b_ok == b_total and not inv_fail
    if not w:
        results = {"cells": total, "thm_a_ok": a_ok, "condition_cells": b_total, "thm_b_ok": b_ok,
                   "invariant_failures": inv_fail}
        verdicts = {"thm_a_all": a_ok == total, "thm_b_all": b_ok == b_total,
                    "invariants_all": not inv_fail}
        _emit(args, "grid", {"n_values": ns, "s_max": args.s_max, "m_max": args.m_max,
                             "seeds": seeds, "prime": args.prime}, results, verdicts)
    return EXIT_OK if ok else EXIT_FAULT


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "text"], default="text")
    common.add_argument("--threads", type=int, default=1,
                        help="worker processes for sweeps and grids; output does not depend on it")

    sampling = _Parser(add_help=False)
    sampling.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    sampling.add_argument("--seed", type=int, default=0)
    sampling.add_argument("--points-file", help="read points from a text file instead of sampling")
    sampling.add_argument("--cap", type=int, default=None, help="largest degree to try")

    parser = _Parser(prog="demailly", description=__doc__.splitlines()[0], epilog=EPILOG,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, parents, help):
        p = sub.add_parser(name, parents=parents, help=help, epilog=EPILOG,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        p.set_defaults(func=func)
        return p

    p = add("bounds", cmd_bounds, [common], "delta and k bounds with the exact inequality chain")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--m", type=int, required=True)

    p = add("max-m", cmd_max_m, [common], "largest m satisfying the part (b) condition")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)

    for name, func, help in (("alpha", cmd_alpha, "alpha(I^(m)) for sampled or given points"),
                             ("verify", cmd_verify, "compute alpha and check both bounds")):
        p = add(name, func, [common, sampling], help)
        p.add_argument("--n", type=int)
        p.add_argument("--s", type=int)
        p.add_argument("--m", type=int)

    p = add("sequence", cmd_sequence, [common, sampling], "alpha(m)/m for m = 1..M plus invariants")
    p.add_argument("--n", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--max-mult", type=int, required=True)

    p = add("sweep", cmd_sweep, [common], "exact theorem sweep over an (n, s, m) grid")
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--s-max", type=int, required=True)
    p.add_argument("--m-max", type=int, required=True)

    p = add("certificate", cmd_certificate, [common], "proof coefficients over s^(1/n) with signs")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--max-bits", type=int, default=4096)

    p = add("compare", cmd_compare, [common], "compare with the condition floor(s^(1/n)) >= m+1")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--m", type=int, required=True)

    p = add("points", cmd_points, [], "write a sampled point set in the text format")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    p.add_argument("--seed", type=int, default=0)

    p = add("grid", cmd_grid, [common], "empirical bound checks over sampled point sets")
    p.add_argument("--n-values", default="1,2,3")
    p.add_argument("--s-max", type=int, default=12)
    p.add_argument("--m-max", type=int, default=4)
    p.add_argument("--seeds", default="1,2,3")
    p.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    prime = getattr(args, "prime", DEFAULT_PRIME)
    if prime < 3 or not is_prime(prime):
        print(f"error: --prime {prime} is not a prime >= 3", file=sys.stderr)
        return EXIT_USAGE
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, UnsupportedDimension, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
