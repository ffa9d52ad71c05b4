import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hlprimes.analytic import DomainError
from hlprimes.engine import (
    EmptyScanError,
    FamilyKind,
    GridSpec,
    RangeFamily,
    Verdict,
    audit_rh,
    audit_unconditional,
    classify,
    evaluate,
    find_first_failure,
    maier_ratio,
    mv_bound_check,
    normalized_psi_deviation,
    oscillation_census,
    range_points,
    scan,
)
from hlprimes.oracle import pi_oracle_batch


def test_classify_trivial():
    assert classify(2, 2, 5) is Verdict.GREATER
    assert classify(4, 4, 8) is Verdict.EQUAL
    assert classify(25, 25, 46) is Verdict.STRICT_LESS
    with pytest.raises(ValueError):
        classify(-1, 0, 0)


@given(st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 10**6))
def test_classify_matches_margin_sign(a, b, c):
    margin = a + b - c
    v = classify(a, b, c)
    assert (v is Verdict.STRICT_LESS) == (margin > 0)
    assert (v is Verdict.EQUAL) == (margin == 0)
    assert (v is Verdict.GREATER) == (margin < 0)


def test_evaluate_examples(counter_1e6):
    v = evaluate(counter_1e6, 2, 2)
    assert (v.pi_xy, v.margin, v.verdict) == (2, 0, Verdict.EQUAL)
    v = evaluate(counter_1e6, 100, 100)
    assert (v.pi_xy, v.margin, v.verdict) == (46, 4, Verdict.STRICT_LESS)
    v = evaluate(counter_1e6, 10, 10)
    assert (v.pi_xy, v.margin, v.verdict) == (8, 0, Verdict.EQUAL)
    assert v.pi_xy >= v.pi_x


def test_evaluate_contracts(counter_1e6):
    with pytest.raises(DomainError):
        evaluate(counter_1e6, 1, 5)
    with pytest.raises(ValueError):
        evaluate(counter_1e6, 10**6, 10**6)  # beyond counter limit
    with pytest.raises(OverflowError):
        evaluate(counter_1e6, 2**62, 2**62)


def test_logpower_formula():
    fam = RangeFamily(FamilyKind.LOG_POWER, c=1.0)
    pts = range_points(fam, GridSpec(10**6, 10**6 + 1, step=5))
    assert pts[0].y == 72382  # floor(1e6 / log 1e6)
    # c = 0 degenerates to y = x
    fam0 = RangeFamily(FamilyKind.LOG_POWER, c=0.0)
    pts = range_points(fam0, GridSpec(1000, 2000, step=500))
    assert all(p.y == p.x for p in pts)


def test_sqrtlogcube_validity():
    fam = RangeFamily(FamilyKind.SQRT_LOG_CUBE)
    # direct arithmetic: sqrt(x) log^3 x vs x
    for x in (10**4, 10**6, 10**7):
        assert math.sqrt(x) * math.log(x) ** 3 > x
        assert not fam.in_validity_region(x)
    for x in (10**8, 10**9):
        assert math.sqrt(x) * math.log(x) ** 3 <= x
        assert fam.in_validity_region(x)
    pts = range_points(fam, GridSpec(10**4, 10**6, points=10))
    assert all(p.skipped for p in pts)


def test_short_interval_formula():
    fam = RangeFamily(FamilyKind.SHORT_INTERVAL, r=2.0)
    pts = range_points(fam, GridSpec(10**4, 10**4 + 1, step=5))
    assert pts[0].y == 84


def test_family_validation():
    with pytest.raises(ValueError):
        RangeFamily(FamilyKind.FIXED_RATIO, delta=0.0)
    with pytest.raises(ValueError):
        RangeFamily(FamilyKind.LOG_POWER, c=-1.0)
    with pytest.raises(ValueError):
        RangeFamily(FamilyKind.SHORT_INTERVAL, r=0.0)
    with pytest.raises(ValueError):
        RangeFamily(FamilyKind.EXPLICIT)


def test_grid_spec():
    with pytest.raises(ValueError):
        GridSpec(10, 10, points=5)
    with pytest.raises(ValueError):
        GridSpec(10, 100)
    with pytest.raises(ValueError):
        GridSpec(10, 100, points=5, step=3)
    xs = GridSpec(10, 10**4, points=50).xs()
    assert xs[0] == 10 and xs[-1] == 10**4
    assert all(b > a for a, b in zip(xs, xs[1:]))  # dedup keeps first
    assert GridSpec(10, 20, step=3).xs() == [10, 13, 16, 19]


def test_scan_explicit(counter_1e6):
    fam = RangeFamily(FamilyKind.EXPLICIT, pairs=((2, 2), (10, 10), (100, 100)))
    rep = scan(counter_1e6, fam)
    assert [r.verdict for r in rep.rows] == [Verdict.EQUAL, Verdict.EQUAL, Verdict.STRICT_LESS]
    assert rep.meta["family"]["kind"] == "Explicit"


def test_scan_all_skipped_is_error(counter_1e6):
    fam = RangeFamily(FamilyKind.SQRT_LOG_CUBE)
    with pytest.raises(EmptyScanError):
        scan(counter_1e6, fam, GridSpec(10**4, 10**5, points=5))


def test_scan_rows_sorted_and_annotated(counter_1e6):
    fam = RangeFamily(FamilyKind.LOG_POWER, c=1.0)
    rep = scan(counter_1e6, fam, GridSpec(10**3, 10**5, points=15), workers=3)
    xs = [r.x for r in rep.rows]
    assert xs == sorted(xs)
    for r in rep.rows:
        assert r.li_pred is not None and r.err_rh is not None
        assert r.err_rh == pytest.approx(math.sqrt(r.x + r.y) * math.log(r.x + r.y))


def test_scan_oracle_spot_check(counter_1e6):
    fam = RangeFamily(FamilyKind.LOG_POWER, c=1.0)
    rep = scan(counter_1e6, fam, GridSpec(10**3, 10**4, points=10),
               oracle_fraction=0.5, seed=1)
    assert rep.meta["oracle_fraction"] == 0.5


def test_mv_bound_examples(counter_1e6):
    rec = mv_bound_check(counter_1e6, 100, 10)
    assert rec.lhs == 4
    assert rec.rhs == pytest.approx(8.6859, abs=1e-4)
    assert rec.holds
    rec = mv_bound_check(counter_1e6, 2, 2)
    assert rec.lhs == 1  # the prime 3
    assert rec.rhs == pytest.approx(5.7708, abs=1e-4)
    rec = mv_bound_check(counter_1e6, 10**5, 1000)
    assert rec.lhs == counter_1e6.count_window(10**5, 10**5 + 1000)
    with pytest.raises(DomainError):
        mv_bound_check(counter_1e6, 100, 1)


def test_mv_window_never_exceeds_h(counter_1e6):
    for x in (10, 1000, 99991):
        for h in (2, 10, 100):
            rec = mv_bound_check(counter_1e6, x, h)
            assert rec.lhs <= h


def test_maier_examples(counter_1e6):
    rec = maier_ratio(counter_1e6, 10**4, 2.0)
    assert rec.h == 84
    assert rec.count == 8  # primes in (10^4, 10^4 + 84]
    assert rec.ratio == pytest.approx(0.8686, abs=1e-4)
    assert rec.reference == pytest.approx(math.exp(0.57721566490153286) / 2, rel=1e-12)
    # r = 1 makes the normalization collapse to the raw count
    rec1 = maier_ratio(counter_1e6, 10**4, 1.0)
    assert rec1.h == 9
    assert rec1.ratio == pytest.approx(rec1.count)


def test_census_brute_force(counter_1e6):
    rep = oscillation_census(counter_1e6, 1.0, 10, 20, 1)
    assert rep.total == 11
    # recompute every verdict with the slow oracle
    want = {"less": 0, "equal": 0, "greater": 0}
    for x in range(10, 21):
        y = max(2, math.floor(math.log(x)))
        px, py, pxy = pi_oracle_batch([x, y, x + y])
        m = px + py - pxy
        want["less" if m > 0 else "equal" if m == 0 else "greater"] += 1
    assert (rep.n_less, rep.n_equal, rep.n_greater) == (
        want["less"], want["equal"], want["greater"]
    )
    assert rep.n_skipped == 0


def test_census_extremes(counter_1e6):
    rep = oscillation_census(counter_1e6, 2.0, 100, 2000, 10)
    assert len(rep.extremes_negative) <= 10
    assert rep.extremes_negative[0][0] == min(m for m, _ in rep.extremes_negative)
    assert rep.extremes_positive[0][0] == max(m for m, _ in rep.extremes_positive)


def test_audit_unconditional_values():
    rec = audit_unconditional(10**6, 1.0, 1.0)
    assert rec.lhs == pytest.approx(0.9999723689788841, rel=1e-12)
    assert rec.rhs == pytest.approx(5.449694200664791, rel=1e-12)
    assert rec.holds


def test_audit_unconditional_c0_limit():
    for x in (100.0, 1e8, 1e30):
        rec = audit_unconditional(x, 0.0, 1e-12)
        assert rec.rhs == pytest.approx(1.0, abs=1e-9)
        assert rec.lhs <= rec.rhs


def test_audit_rh_values():
    rec = audit_rh(10**6, 1.0)
    lx = math.log(10**6)
    assert rec.lhs == pytest.approx(1 - 2 / (1000 * lx**3), rel=1e-12)
    assert rec.rhs == pytest.approx(0.5 + math.log(lx**3) / lx + 1 / lx, rel=1e-12)
    assert rec.holds


def test_audit_domains():
    with pytest.raises(DomainError):
        audit_unconditional(10, 1.0, 1.0)
    with pytest.raises(DomainError):
        audit_unconditional(100, -0.5, 1.0)
    with pytest.raises(DomainError):
        audit_rh(100, 0.0)


def test_audit_rh_crossing():
    xc = find_first_failure(lambda x: audit_rh(x, 1.0), 10**6, 10**30)
    assert xc is not None
    # the crossing exists for every K and rhs -> 1/2 while lhs -> 1
    assert audit_rh(xc * 2, 1.0).holds is False
    assert audit_rh(xc / 2, 1.0).holds is True
    assert not audit_rh(1e30, 1.0).holds


def test_audit_unconditional_crossing_is_astronomical():
    # the error term dominates until far beyond desk scale, but the
    # crossing is still representable in float64
    xc = find_first_failure(lambda x: audit_unconditional(x, 1.0, 1.0), 16, 1e308)
    assert xc is not None
    assert 1e80 < xc < 1e95
    assert audit_unconditional(xc / 10, 1.0, 1.0).holds


def test_audit_no_failure_returns_none():
    assert find_first_failure(lambda x: audit_rh(x, 1.0), 10**6, 10**7) is None


def test_psi_deviation(counter_1e6):
    v = normalized_psi_deviation(counter_1e6, 100)
    assert v == pytest.approx(-0.2553, abs=2e-4)
    # sign agrees with psi(x) - x
    psi = counter_1e6.chebyshev(100).psi
    assert (v < 0) == (psi < 100)
    with pytest.raises(DomainError):
        normalized_psi_deviation(counter_1e6, 15)
