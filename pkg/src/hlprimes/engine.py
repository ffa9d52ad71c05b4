"""Hardy-Littlewood inequality verdicts, range-family scans, proof-chain
audits, and short-interval prime statistics.

The engine is a measuring instrument: it reports the full trichotomy
pi(x) + pi(y) - pi(x+y) {>0, =0, <0} and never assumes the conjectured
inequality holds.
"""

from __future__ import annotations

import enum
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .analytic import (
    EULER_GAMMA,
    DomainError,
    ErrorKind,
    ErrorModel,
    error_term,
    li,
)
from .sieve import PrimeCounter

INT64_MAX = 2**63 - 1

ENGINE_VERSION = "0.1.0"


class EmptyScanError(ValueError):
    """Every grid point was skipped or the grid itself was empty."""


class Verdict(enum.Enum):
    STRICT_LESS = "LESS"  # pi(x+y) < pi(x) + pi(y)
    EQUAL = "EQUAL"
    GREATER = "GREATER"  # a Hardy-Littlewood counterexample


def classify(pi_x: int, pi_y: int, pi_xy: int) -> Verdict:
    """Trichotomy on the margin pi_x + pi_y - pi_xy."""
    if min(pi_x, pi_y, pi_xy) < 0:
        raise ValueError("prime counts must be nonnegative")
    margin = pi_x + pi_y - pi_xy
    if margin > 0:
        return Verdict.STRICT_LESS
    if margin == 0:
        return Verdict.EQUAL
    return Verdict.GREATER


@dataclass(frozen=True)
class IntervalVerdict:
    x: int
    y: int
    pi_x: int
    pi_y: int
    pi_xy: int
    margin: int
    verdict: Verdict


def evaluate(counter: PrimeCounter, x: int, y: int) -> IntervalVerdict:
    """Exact Hardy-Littlewood verdict at (x, y); never estimates."""
    x, y = int(x), int(y)
    if x < 2 or y < 2:
        raise DomainError(f"evaluate requires x >= 2 and y >= 2, got ({x}, {y})")
    if x + y > INT64_MAX:
        raise OverflowError(f"x + y = {x}+{y} exceeds 64-bit range")
    pi_x = counter.pi(x)
    pi_y = counter.pi(y)
    pi_xy = counter.pi(x + y)
    margin = pi_x + pi_y - pi_xy
    return IntervalVerdict(
        x=x, y=y, pi_x=pi_x, pi_y=pi_y, pi_xy=pi_xy,
        margin=margin, verdict=classify(pi_x, pi_y, pi_xy),
    )


class FamilyKind(enum.Enum):
    FIXED_RATIO = "FixedRatio"      # y = delta * x
    LOG_POWER = "LogPower"          # y = x / log^c x
    SQRT_LOG_CUBE = "SqrtLogCube"   # y = sqrt(x) * log^3 x
    SHORT_INTERVAL = "ShortInterval"  # y = log^r x
    EXPLICIT = "Explicit"


@dataclass(frozen=True)
class RangeFamily:
    """Generator of (x, y) pairs for one theorem/conjecture range."""

    kind: FamilyKind
    delta: float | None = None
    c: float | None = None
    r: float | None = None
    pairs: tuple = ()

    def __post_init__(self):
        if self.kind is FamilyKind.FIXED_RATIO:
            if self.delta is None or not (0 < self.delta <= 1):
                raise ValueError(f"FixedRatio needs 0 < delta <= 1, got {self.delta}")
        elif self.kind is FamilyKind.LOG_POWER:
            if self.c is None or self.c < 0:
                raise ValueError(f"LogPower needs c >= 0, got {self.c}")
        elif self.kind is FamilyKind.SHORT_INTERVAL:
            if self.r is None or self.r <= 0:
                raise ValueError(f"ShortInterval needs r > 0, got {self.r}")
        elif self.kind is FamilyKind.EXPLICIT:
            if not self.pairs:
                raise ValueError("Explicit family needs a nonempty pairs list")

    def y_real(self, x: int) -> float:
        lx = math.log(x)
        if self.kind is FamilyKind.FIXED_RATIO:
            return self.delta * x
        if self.kind is FamilyKind.LOG_POWER:
            return x / lx**self.c
        if self.kind is FamilyKind.SQRT_LOG_CUBE:
            return math.sqrt(x) * lx**3
        if self.kind is FamilyKind.SHORT_INTERVAL:
            return lx**self.r
        raise ValueError("Explicit family has no formula")

    def in_validity_region(self, x: int) -> bool:
        """Whether x lies where the family's defining range applies."""
        if self.kind is FamilyKind.SQRT_LOG_CUBE:
            # need sqrt(x) * log^3 x <= x, i.e. log^3 x <= sqrt(x)
            return math.log(x) ** 3 <= math.sqrt(x)
        return True

    def params(self) -> dict:
        out = {"kind": self.kind.value}
        if self.delta is not None:
            out["delta"] = self.delta
        if self.c is not None:
            out["c"] = self.c
        if self.r is not None:
            out["r"] = self.r
        if self.pairs:
            out["pairs"] = [list(p) for p in self.pairs]
        return out


@dataclass(frozen=True)
class GridSpec:
    """x grid: geometric with `points` samples or arithmetic with `step`."""

    x_min: int
    x_max: int
    points: int | None = None
    step: int | None = None

    def __post_init__(self):
        if self.x_min < 2 or self.x_min >= self.x_max:
            raise ValueError(
                f"grid needs 2 <= x_min < x_max, got [{self.x_min}, {self.x_max}]"
            )
        if (self.points is None) == (self.step is None):
            raise ValueError("grid needs exactly one of points or step")
        if self.points is not None and self.points < 1:
            raise ValueError(f"points must be >= 1, got {self.points}")
        if self.step is not None and self.step < 1:
            raise ValueError(f"step must be >= 1, got {self.step}")

    def xs(self) -> list[int]:
        """Deterministic ascending x values; floor ties keep the first."""
        if self.step is not None:
            return list(range(self.x_min, self.x_max + 1, self.step))
        n = self.points
        if n == 1:
            return [self.x_min]
        ratio = (self.x_max / self.x_min) ** (1.0 / (n - 1))
        out: list[int] = []
        for i in range(n):
            x = int(self.x_min * ratio**i)
            x = min(max(x, self.x_min), self.x_max)
            if not out or x > out[-1]:
                out.append(x)
        return out

    def params(self) -> dict:
        out = {"x_min": self.x_min, "x_max": self.x_max}
        if self.points is not None:
            out["points"] = self.points
        else:
            out["step"] = self.step
        return out


@dataclass(frozen=True)
class RangePoint:
    x: int
    y: int
    y_real: float
    skipped: bool


def range_points(family: RangeFamily, grid: GridSpec | None) -> list[RangePoint]:
    """Deterministic (x, y) sequence; out-of-validity points flagged skipped."""
    if family.kind is FamilyKind.EXPLICIT:
        pts = []
        for x, y in family.pairs:
            x, y = int(x), int(y)
            pts.append(RangePoint(x=x, y=y, y_real=float(y), skipped=(x < 2 or y < 2)))
        return pts
    if grid is None:
        raise ValueError("non-explicit families require a grid")
    pts = []
    for x in grid.xs():
        yr = family.y_real(x)
        y = max(2, math.floor(yr))
        skipped = not family.in_validity_region(x)
        pts.append(RangePoint(x=x, y=y, y_real=yr, skipped=skipped))
    return pts


@dataclass(frozen=True)
class ScanRow:
    """One scan record; analytic annotations are None on skipped rows."""

    x: int
    y: int
    skipped: bool
    pi_x: int | None = None
    pi_y: int | None = None
    pi_xy: int | None = None
    margin: int | None = None
    verdict: Verdict | None = None
    li_pred: float | None = None
    err_rh: float | None = None
    err_uncond: float | None = None


@dataclass
class ScanReport:
    meta: dict
    rows: list[ScanRow] = field(default_factory=list)
    # kept out of meta so serialized reports stay byte-reproducible
    wall_time_s: float = 0.0

    @property
    def active_rows(self) -> list[ScanRow]:
        return [r for r in self.rows if not r.skipped]


_RH = ErrorModel(ErrorKind.RH_PI)
_UNCOND = ErrorModel(ErrorKind.UNCOND_PI)

LI_ANNOTATION_TOL = 1e-6


def compute_scan_row(counter: PrimeCounter, pt: RangePoint) -> ScanRow:
    """Evaluate one range point into a fully annotated row."""
    if pt.skipped:
        return ScanRow(x=pt.x, y=pt.y, skipped=True)
    v = evaluate(counter, pt.x, pt.y)
    s = pt.x + pt.y
    li_pred = li(s, LI_ANNOTATION_TOL) - li(pt.x, LI_ANNOTATION_TOL) - li(pt.y, LI_ANNOTATION_TOL)
    return ScanRow(
        x=v.x, y=v.y, skipped=False,
        pi_x=v.pi_x, pi_y=v.pi_y, pi_xy=v.pi_xy,
        margin=v.margin, verdict=v.verdict,
        li_pred=li_pred,
        err_rh=error_term(_RH, s),
        err_uncond=error_term(_UNCOND, s),
    )


def scan_meta(counter: PrimeCounter, family: RangeFamily, grid: GridSpec | None,
              workers: int = 1) -> dict:
    return {
        "family": family.params(),
        "grid": grid.params() if grid is not None else None,
        "counter_limit": counter.limit,
        "counter_method": counter.method.value,
        "engine_version": ENGINE_VERSION,
        "workers": workers,
    }


def scan(counter: PrimeCounter, family: RangeFamily, grid: GridSpec | None = None,
         workers: int = 1, oracle_fraction: float = 0.0, seed: int = 0) -> ScanReport:
    """Evaluate a whole range family; rows come back sorted by (x, y).

    Raises EmptyScanError when no point survives the skip policy, and
    surfaces the offending point when the counter limit is exceeded.
    With oracle_fraction > 0, that fraction of rows (those with
    x + y within the oracle cap) is re-verified against the independent
    trial-division oracle; any mismatch raises.
    """
    pts = range_points(family, grid)
    if not any(not p.skipped for p in pts):
        raise EmptyScanError(
            f"no evaluable points: all {len(pts)} grid points skipped"
        )
    for p in pts:
        if not p.skipped and p.x + p.y > counter.limit:
            raise ValueError(
                f"point (x={p.x}, y={p.y}) needs pi({p.x + p.y}) "
                f"beyond counter limit {counter.limit}"
            )
    t0 = time.monotonic()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda p: compute_scan_row(counter, p), pts))
    else:
        rows = [compute_scan_row(counter, p) for p in pts]
    rows.sort(key=lambda r: (r.x, r.y))
    if oracle_fraction > 0.0:
        _oracle_spot_check(rows, oracle_fraction, seed)
    meta = scan_meta(counter, family, grid, workers)
    meta["oracle_fraction"] = oracle_fraction
    meta["seed"] = seed
    return ScanReport(meta=meta, rows=rows, wall_time_s=time.monotonic() - t0)


def _oracle_spot_check(rows: list[ScanRow], fraction: float, seed: int) -> None:
    """Re-verify a random row subsample against the trial-division oracle."""
    import random

    from .oracle import ORACLE_CAP, pi_oracle_batch

    cands = [r for r in rows if not r.skipped and r.x + r.y <= ORACLE_CAP]
    if not cands:
        return
    k = min(len(cands), max(1, round(fraction * len(cands))))
    sample = random.Random(seed).sample(cands, k)
    args = []
    for r in sample:
        args.extend((r.x, r.y, r.x + r.y))
    got = pi_oracle_batch(args)
    for i, r in enumerate(sample):
        ox, oy, oxy = got[3 * i : 3 * i + 3]
        if (ox, oy, oxy) != (r.pi_x, r.pi_y, r.pi_xy):
            raise AssertionError(
                f"oracle mismatch at (x={r.x}, y={r.y}): engine "
                f"({r.pi_x},{r.pi_y},{r.pi_xy}) vs oracle ({ox},{oy},{oxy})"
            )


# ---------------------------------------------------------------------------
# Short-interval statistics


@dataclass(frozen=True)
class MVBoundRecord:
    """Window prime count against the 2h/log h sieve bound."""

    x: int
    h: int
    lhs: int
    rhs: float
    holds: bool


def mv_bound_check(counter: PrimeCounter, x: int, h: int) -> MVBoundRecord:
    """pi(x+h) - pi(x) <= 2h / log h, checked exactly."""
    x, h = int(x), int(h)
    if x < 2:
        raise DomainError(f"mv_bound_check requires x >= 2, got {x}")
    if h < 2:
        raise DomainError(f"mv_bound_check requires h >= 2 (log h > 0), got {h}")
    lhs = counter.count_window(x, x + h)
    rhs = 2.0 * h / math.log(h)
    return MVBoundRecord(x=x, h=h, lhs=lhs, rhs=rhs, holds=lhs <= rhs)


@dataclass(frozen=True)
class MaierRecord:
    """Normalized short-interval prime count at window h = log^r x."""

    x: int
    r: float
    h: int
    count: int
    ratio: float
    reference: float  # e^gamma / r reference line (sharp for 1 < r < e^gamma)


def maier_ratio(counter: PrimeCounter, x: int, r: float) -> MaierRecord:
    """(pi(x+h) - pi(x)) / (log^r x / log x) with h = floor(log^r x).

    The denominator keeps the real-valued log^r x; only the window end is
    floored.
    """
    x = int(x)
    if x < 3:
        raise DomainError(f"maier_ratio requires x >= 3, got {x}")
    if r <= 0:
        raise DomainError(f"maier_ratio requires r > 0, got {r}")
    lx = math.log(x)
    h = math.floor(lx**r)
    if h < 1:
        raise DomainError(f"window floor(log^{r} x) = {h} < 1 at x = {x}")
    count = counter.count_window(x, x + h)
    ratio = count * lx / lx**r
    reference = math.exp(EULER_GAMMA) / r
    return MaierRecord(x=x, r=r, h=h, count=count, ratio=ratio, reference=reference)


@dataclass(frozen=True)
class CensusReport:
    """Trichotomy tallies for y = log^r x over an arithmetic grid."""

    r: float
    x_min: int
    x_max: int
    step: int
    n_less: int
    n_equal: int
    n_greater: int
    n_skipped: int
    extremes_negative: tuple  # up to 10 (margin, x), most negative first
    extremes_positive: tuple  # up to 10 (margin, x), most positive first

    @property
    def total(self) -> int:
        return self.n_less + self.n_equal + self.n_greater + self.n_skipped


def oscillation_census(counter: PrimeCounter, r: float, x_min: int, x_max: int,
                       step: int = 1) -> CensusReport:
    """Tally Hardy-Littlewood verdicts for y = floor(log^r x), clamped >= 2."""
    if r <= 0:
        raise DomainError(f"census requires r > 0, got {r}")
    if x_min < 2 or x_min >= x_max:
        raise ValueError(f"census needs 2 <= x_min < x_max, got [{x_min}, {x_max}]")
    if step < 1:
        raise ValueError(f"step must be >= 1, got {step}")
    n_less = n_equal = n_greater = n_skipped = 0
    margins: list[tuple[int, int]] = []
    for x in range(x_min, x_max + 1, step):
        y = max(2, math.floor(math.log(x) ** r))
        if x + y > counter.limit:
            raise ValueError(
                f"census point (x={x}, y={y}) exceeds counter limit {counter.limit}"
            )
        v = evaluate(counter, x, y)
        if v.verdict is Verdict.STRICT_LESS:
            n_less += 1
        elif v.verdict is Verdict.EQUAL:
            n_equal += 1
        else:
            n_greater += 1
        margins.append((v.margin, x))
    margins.sort()
    neg = tuple(m for m in margins[:10])
    pos = tuple(m for m in sorted(margins, reverse=True)[:10])
    return CensusReport(
        r=r, x_min=x_min, x_max=x_max, step=step,
        n_less=n_less, n_equal=n_equal, n_greater=n_greater, n_skipped=n_skipped,
        extremes_negative=neg, extremes_positive=pos,
    )


# ---------------------------------------------------------------------------
# Proof-chain inequality audits


@dataclass(frozen=True)
class AuditRecord:
    """Both sides of a proof's final inequality, as written, at one x."""

    x: float
    lhs: float
    rhs: float
    params: dict

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs


def audit_unconditional(x: float, c: float, K: float = 1.0) -> AuditRecord:
    """Final inequality of the unconditional proof chain.

    lhs = 1 - 2 log^c x / x
    rhs = 1 - c log log x / log x + K log^(c+1) x / e^sqrt(log x)

    The proof argues lhs > rhs for large x; the audit reports where that
    actually happens for the supplied implied constant K.
    """
    if x < 16:
        raise DomainError(f"audit requires x >= 16 (log log x > 0), got {x}")
    if c < 0:
        raise DomainError(f"audit requires c >= 0, got {c}")
    if K <= 0:
        raise DomainError(f"audit requires K > 0, got {K}")
    lx = math.log(x)
    lhs = 1.0 - 2.0 * lx**c / x
    rhs = 1.0 - c * math.log(lx) / lx + K * lx ** (c + 1) / math.exp(math.sqrt(lx))
    return AuditRecord(x=float(x), lhs=lhs, rhs=rhs, params={"c": c, "K": K})


def audit_rh(x: float, K: float = 1.0) -> AuditRecord:
    """Final inequality of the RH-conditional proof chain.

    lhs = 1 - 2 / (sqrt(x) log^3 x)
    rhs = 1/2 + log(log^3 x) / log x + K / log x
    """
    if x < 16:
        raise DomainError(f"audit requires x >= 16, got {x}")
    if K <= 0:
        raise DomainError(f"audit requires K > 0, got {K}")
    lx = math.log(x)
    lhs = 1.0 - 2.0 / (math.sqrt(x) * lx**3)
    rhs = 0.5 + math.log(lx**3) / lx + K / lx
    return AuditRecord(x=float(x), lhs=lhs, rhs=rhs, params={"K": K})


def find_first_failure(audit_fn, x_lo: float, x_hi: float,
                       grid_points: int = 200, rel_tol: float = 1e-3):
    """Smallest x in [x_lo, x_hi] where an audit stops holding, or None.

    Scans a geometric grid for the first holds=False point, then bisects
    in log space down to the requested relative width.
    """
    if x_lo < 16 or x_lo >= x_hi:
        raise ValueError(f"need 16 <= x_lo < x_hi, got [{x_lo}, {x_hi}]")
    lo, hi = math.log(x_lo), math.log(x_hi)
    n = max(grid_points, 2)
    def at(t: float) -> float:
        return min(max(math.exp(t), x_lo), x_hi)

    prev = lo
    hit = None
    for i in range(n):
        t = lo + (hi - lo) * i / (n - 1)
        if not audit_fn(at(t)).holds:
            hit = t
            break
        prev = t
    if hit is None:
        return None
    if hit == lo:
        return x_lo
    a, b = prev, hit
    while b - a > rel_tol:
        m = 0.5 * (a + b)
        if audit_fn(math.exp(m)).holds:
            a = m
        else:
            b = m
    return math.exp(b)


def normalized_psi_deviation(counter: PrimeCounter, x: int) -> float:
    """(psi(x) - x) / (sqrt(x) (log log x)^2); the LI-conjecture statistic."""
    x = int(x)
    if x < 16:
        raise DomainError(f"statistic requires x >= 16, got {x}")
    psi = counter.chebyshev(x).psi
    return (psi - x) / (math.sqrt(x) * math.log(math.log(x)) ** 2)
