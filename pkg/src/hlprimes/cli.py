"""Command line interface.

Exit codes: 0 = success, 1 = operational failure (bad flags, I/O, limits),
2 = mathematical surprise (a Hardy-Littlewood counterexample was found).
The distinction lets counterexample-hunting scripts react mechanically.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from decimal import Decimal, InvalidOperation

import numpy as np

from . import engine, report
from .engine import FamilyKind, GridSpec, RangeFamily
from .sieve import Method, build_counter, simple_sieve

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_SURPRISE = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # operational failure, not exit code 2
        raise UsageError(message)


def exact_int(text: str) -> int:
    """Parse '1e8'-style notation as an exact integer."""
    try:
        d = Decimal(text)
    except InvalidOperation:
        raise UsageError(f"not a number: {text!r}")
    if d != d.to_integral_value():
        raise UsageError(f"expected an integer, got {text!r}")
    return int(d)


def _default_workers() -> int:
    return os.cpu_count() or 1


def build_parser() -> _Parser:
    p = _Parser(prog="hlprimes", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def add_counter_flags(sp):
        sp.add_argument("--limit", type=exact_int, default=None,
                        help="counter limit (default: derived from the request)")
        sp.add_argument("--method", choices=["sieve", "sublinear"], default=None,
                        help="counting backend (default: sieve <= 1e8, else sublinear)")
        sp.add_argument("--threads", type=int, default=_default_workers())
        sp.add_argument("--seed", type=int, default=0)

    v = sub.add_parser("verify", help="exhaustive HL census over all small (x, y)")
    v.add_argument("--max-sum", type=exact_int, required=True)
    v.add_argument("--dump", default="hl_counterexamples.csv",
                   help="where Greater findings are dumped")

    s = sub.add_parser("scan", help="range-family scan")
    s.add_argument("--family", choices=["ratio", "logpow", "sqrtlog3", "short", "explicit"],
                   required=True)
    s.add_argument("--delta", type=float, default=None)
    s.add_argument("--c", type=float, default=None)
    s.add_argument("--r", type=float, default=None)
    s.add_argument("--pairs", default=None, help="explicit pairs as x:y,x:y,...")
    s.add_argument("--xmin", type=exact_int, default=None)
    s.add_argument("--xmax", type=exact_int, default=None)
    s.add_argument("--points", type=int, default=None)
    s.add_argument("--step", type=exact_int, default=None)
    s.add_argument("--out", required=True, help="output base path (.csv/.jsonl added)")
    s.add_argument("--checkpoint", default=None)
    s.add_argument("--oracle-check", type=float, default=0.0,
                   help="fraction of rows to re-verify with the slow oracle")
    add_counter_flags(s)

    a = sub.add_parser("audit", help="numeric audit of the proof inequalities")
    a.add_argument("--theorem", type=int, choices=[1, 2], required=True)
    a.add_argument("--c", type=float, default=None)
    a.add_argument("--K", type=float, default=1.0)
    a.add_argument("--xmin", type=exact_int, default=10**4)
    a.add_argument("--xmax", type=exact_int, default=10**30)
    a.add_argument("--points", type=int, default=50)
    a.add_argument("--out", default=None)

    m = sub.add_parser("mv", help="window bound pi(x+h)-pi(x) <= 2h/log h")
    m.add_argument("--h", type=exact_int, action="append", required=True)
    m.add_argument("--x", type=exact_int, default=None)
    m.add_argument("--xmin", type=exact_int, default=None)
    m.add_argument("--xmax", type=exact_int, default=None)
    m.add_argument("--points", type=int, default=50)
    m.add_argument("--out", default=None)
    add_counter_flags(m)

    mr = sub.add_parser("maier", help="short-interval ratio with h = log^r x")
    mr.add_argument("--r", type=float, required=True)
    mr.add_argument("--x", type=exact_int, default=None)
    mr.add_argument("--xmin", type=exact_int, default=None)
    mr.add_argument("--xmax", type=exact_int, default=None)
    mr.add_argument("--points", type=int, default=50)
    mr.add_argument("--out", default=None)
    add_counter_flags(mr)

    ps = sub.add_parser("psistat", help="normalized psi deviation statistic")
    ps.add_argument("--x", type=exact_int, default=None)
    ps.add_argument("--xmin", type=exact_int, default=None)
    ps.add_argument("--xmax", type=exact_int, default=None)
    ps.add_argument("--points", type=int, default=20)
    ps.add_argument("--out", default=None)
    add_counter_flags(ps)

    return p


def pi_table(limit: int) -> np.ndarray:
    """pi(n) for n = 0..limit as an int64 array."""
    is_prime = np.zeros(limit + 1, dtype=np.int64)
    is_prime[simple_sieve(limit)] = 1
    return np.cumsum(is_prime)


def cmd_verify(args) -> int:
    """Exhaustive trichotomy census over 2 <= x <= y, x + y <= max_sum."""
    max_sum = args.max_sum
    if max_sum < 4:
        raise UsageError(f"--max-sum must be >= 4, got {max_sum}")
    pi = pi_table(max_sum)
    n_less = n_equal = n_greater = 0
    n_pairs = 0
    equal_examples: list[tuple[int, int]] = []
    greater_rows: list[tuple[int, int, int, int, int, int]] = []
    for x in range(2, max_sum // 2 + 1):
        ys = np.arange(x, max_sum - x + 1)
        if ys.size == 0:
            continue
        margins = pi[x] + pi[ys] - pi[x + ys]
        n_pairs += ys.size
        n_less += int(np.count_nonzero(margins > 0))
        eq_idx = np.flatnonzero(margins == 0)
        n_equal += eq_idx.size
        if eq_idx.size and len(equal_examples) < 20:
            equal_examples.extend((x, int(ys[i])) for i in eq_idx[:20])
        gt_idx = np.flatnonzero(margins < 0)
        n_greater += gt_idx.size
        for i in gt_idx:
            y = int(ys[i])
            greater_rows.append(
                (x, y, int(pi[x]), int(pi[y]), int(pi[x + y]), int(margins[i]))
            )
    print(f"pairs={n_pairs} less={n_less} equal={n_equal} greater={n_greater}")
    if equal_examples:
        shown = ", ".join(f"({a},{b})" for a, b in equal_examples[:10])
        print(f"equality examples: {shown}")
    if n_greater:
        with open(args.dump, "w", newline="\n", encoding="utf-8") as f:
            f.write("x,y,pi_x,pi_y,pi_xy,margin\n")
            for row in greater_rows:
                f.write(",".join(map(str, row)) + "\n")
        print(f"COUNTEREXAMPLES FOUND: {n_greater} pairs violate "
              f"pi(x+y) <= pi(x)+pi(y); dumped to {args.dump}")
        return EXIT_SURPRISE
    return EXIT_OK


def _build_family(args) -> RangeFamily:
    if args.family == "ratio":
        if args.delta is None:
            raise UsageError("--family ratio requires --delta")
        return RangeFamily(FamilyKind.FIXED_RATIO, delta=args.delta)
    if args.family == "logpow":
        if args.c is None:
            raise UsageError("--family logpow requires --c")
        return RangeFamily(FamilyKind.LOG_POWER, c=args.c)
    if args.family == "sqrtlog3":
        return RangeFamily(FamilyKind.SQRT_LOG_CUBE)
    if args.family == "short":
        if args.r is None:
            raise UsageError("--family short requires --r")
        return RangeFamily(FamilyKind.SHORT_INTERVAL, r=args.r)
    if args.pairs is None:
        raise UsageError("--family explicit requires --pairs x:y,x:y,...")
    pairs = []
    for chunk in args.pairs.split(","):
        try:
            xs, ys = chunk.split(":")
            pairs.append((exact_int(xs), exact_int(ys)))
        except ValueError:
            raise UsageError(f"bad pair {chunk!r}, expected x:y")
    return RangeFamily(FamilyKind.EXPLICIT, pairs=tuple(pairs))


def _build_grid(args, required: bool = True) -> GridSpec | None:
    if args.xmin is None or args.xmax is None:
        if required:
            raise UsageError("this command requires --xmin and --xmax")
        return None
    if args.points is not None and args.step is not None:
        raise UsageError("give either --points or --step, not both")
    if getattr(args, "step", None) is not None:
        return GridSpec(args.xmin, args.xmax, step=args.step)
    return GridSpec(args.xmin, args.xmax, points=args.points or 200)


def _needed_limit(family: RangeFamily, grid: GridSpec | None) -> int:
    pts = engine.range_points(family, grid)
    active = [p.x + p.y for p in pts if not p.skipped]
    if not active:
        # let scan raise its EmptyScanError with full context
        return max((p.x + p.y for p in pts), default=4)
    return max(active)


def _make_counter(args, needed: int):
    limit = args.limit if args.limit is not None else needed
    if limit < needed:
        raise UsageError(f"--limit {limit} below required {needed}")
    if args.method is not None:
        method = Method(args.method)
    else:
        method = Method.SIEVE_TABLE if limit <= 10**8 else Method.SUBLINEAR
    return build_counter(max(limit, 4), method)


def cmd_scan(args) -> int:
    family = _build_family(args)
    grid = _build_grid(args, required=(args.family != "explicit"))
    counter = _make_counter(args, _needed_limit(family, grid))
    if args.checkpoint:
        rep = report.run_checkpointed_scan(counter, family, grid, args.checkpoint)
    else:
        rep = engine.scan(counter, family, grid, workers=args.threads,
                          oracle_fraction=args.oracle_check, seed=args.seed)
    rep.meta["argv"] = _reproducible_argv(args)
    report.write_csv(rep, args.out + ".csv")
    report.write_jsonl(rep, args.out + ".jsonl")
    n = len(rep.active_rows)
    worst = min((r.margin for r in rep.active_rows), default=None)
    n_greater = sum(1 for r in rep.active_rows if r.verdict is engine.Verdict.GREATER)
    print(f"rows={len(rep.rows)} active={n} skipped={len(rep.rows) - n} "
          f"min_margin={worst} -> {args.out}.csv/.jsonl")
    if n_greater:
        print(f"COUNTEREXAMPLES FOUND: {n_greater} rows with margin < 0")
        return EXIT_SURPRISE
    return EXIT_OK


def _reproducible_argv(args) -> list[str]:
    return list(sys.argv[1:]) if sys.argv[1:] else [args.command]


def _write_table(path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="\n", encoding="utf-8") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(
                f"{v:.17g}" if isinstance(v, float) else str(v) for v in row
            ) + "\n")


def cmd_audit(args) -> int:
    if args.K <= 0:
        raise UsageError(f"--K must be positive, got {args.K}")
    if args.theorem == 1:
        c = args.c if args.c is not None else 1.0
        fn = lambda x: engine.audit_unconditional(x, c, args.K)
        label = f"unconditional chain, c={c}, K={args.K}"
    else:
        if args.c is not None:
            print("warning: --c is ignored for --theorem 2", file=sys.stderr)
        fn = lambda x: engine.audit_rh(x, args.K)
        label = f"RH chain, K={args.K}"
    lo, hi = max(args.xmin, 16), args.xmax
    if lo >= hi:
        raise UsageError(f"need xmin < xmax (effective [{lo}, {hi}])")
    rows = []
    n = max(args.points, 2)
    for i in range(n):
        x = lo * (hi / lo) ** (i / (n - 1))
        rec = fn(x)
        rows.append([rec.x, rec.lhs, rec.rhs, int(rec.holds)])
    crossing = engine.find_first_failure(fn, lo, hi, grid_points=max(n, 200))
    print(f"audit of {label} over [{lo:g}, {hi:g}] ({n} points)")
    held = sum(r[3] for r in rows)
    print(f"holds at {held}/{n} grid points")
    if crossing is None:
        print(f"no failure located below {hi:g}")
    else:
        print(f"first failure near x = {crossing:.6g}")
    if args.out:
        _write_table(args.out, ["x", "lhs", "rhs", "holds"], rows)
        print(f"table -> {args.out}")
    return EXIT_OK


def _stat_grid(args) -> list[int]:
    if args.x is not None:
        return [args.x]
    if args.xmin is None or args.xmax is None:
        raise UsageError("give --x or both --xmin and --xmax")
    grid = GridSpec(args.xmin, args.xmax, points=args.points)
    return grid.xs()


def cmd_mv(args) -> int:
    xs = _stat_grid(args)
    hs = args.h
    for h in hs:
        if h < 2:
            raise UsageError(f"--h must be >= 2 (log h > 0), got {h}")
    counter = _make_counter(args, max(xs) + max(hs))
    rows = []
    violations = 0
    for x in xs:
        for h in hs:
            rec = engine.mv_bound_check(counter, x, h)
            rows.append([rec.x, rec.h, rec.lhs, rec.rhs, int(rec.holds)])
            if not rec.holds:
                violations += 1
    print(f"checked {len(rows)} (x, h) points; violations={violations}")
    for row in rows[: min(len(rows), 10)]:
        print(f"  x={row[0]} h={row[1]} count={row[2]} bound={row[3]:.4f} holds={bool(row[4])}")
    if args.out:
        _write_table(args.out, ["x", "h", "count", "bound", "holds"], rows)
        print(f"table -> {args.out}")
    return EXIT_SURPRISE if violations else EXIT_OK


def cmd_maier(args) -> int:
    if args.r <= 1:
        raise UsageError(
            f"--r must be > 1 (the short-interval limit statements need r > 1), got {args.r}"
        )
    xs = _stat_grid(args)
    max_h = max(math.floor(math.log(x) ** args.r) for x in xs)
    counter = _make_counter(args, max(xs) + max_h)
    rows = []
    for x in xs:
        rec = engine.maier_ratio(counter, x, args.r)
        rows.append([rec.x, rec.h, rec.count, rec.ratio, rec.reference])
    print(f"maier ratio at r={args.r}, reference e^gamma/r = {rows[0][4]:.6f}")
    for row in rows[: min(len(rows), 10)]:
        print(f"  x={row[0]} h={row[1]} count={row[2]} ratio={row[3]:.6f}")
    if args.out:
        _write_table(args.out, ["x", "h", "count", "ratio", "reference"], rows)
        print(f"table -> {args.out}")
    return EXIT_OK


def cmd_psistat(args) -> int:
    xs = _stat_grid(args)
    if min(xs) < 16:
        raise UsageError("psistat requires x >= 16")
    counter = _make_counter(args, max(xs))
    rows = []
    for x in xs:
        v = engine.normalized_psi_deviation(counter, x)
        rows.append([x, v])
    inv_pi = 1.0 / math.pi
    print(f"normalized psi deviation; conjectured asymptotic band +/- 1/pi = {inv_pi:.6f} "
          "(recorded, not asserted)")
    for row in rows[: min(len(rows), 20)]:
        print(f"  x={row[0]} stat={row[1]:+.6f}")
    if args.out:
        _write_table(args.out, ["x", "stat"], rows)
        print(f"table -> {args.out}")
    return EXIT_OK


_COMMANDS = {
    "verify": cmd_verify,
    "scan": cmd_scan,
    "audit": cmd_audit,
    "mv": cmd_mv,
    "maier": cmd_maier,
    "psistat": cmd_psistat,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except (ValueError, OSError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
