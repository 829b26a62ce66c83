"""End-to-end acceptance checks, one test per criterion.

The conftest hook prints a PASS/FAIL line per criterion in the terminal summary.
"""

import time

import numpy as np
import pytest

from fermatpts import curve, surface, verify
from fermatpts.gfcore import build_field, build_tower, gcd_helper, prime_powers, t_kernel
from fermatpts.points import BudgetExceeded, representative_count

ORACLE_QS = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]
SURFACE_QS = [2, 3, 4, 5, 7, 9]


@pytest.mark.criterion(1, "curve: parametric equals brute force, q in {2..16}, i = 1, 2, 3, under 5 min")
def test_curve_oracle_equivalence():
    start = time.monotonic()
    mismatched = []
    for q in ORACLE_QS:
        for i in (1, 2, 3):
            t = build_tower(q, i)
            if curve.enumerate_parametric(t).keyset() != curve.enumerate_brute(t.top, q - 1).keyset():
                mismatched.append((q, i))
    elapsed = time.monotonic() - start
    print(f"curve oracle: {len(ORACLE_QS) * 3} cases in {elapsed:.1f}s")
    assert mismatched == []
    assert elapsed < 300


@pytest.mark.criterion(2, "curve: enumerated totals match the closed forms for q <= 64, plus spot values")
def test_curve_counts():
    wrong = []
    for q in prime_powers(64):
        for i in (1, 2, 3):
            n = len(curve.enumerate_parametric(build_tower(q, i)))
            if n != curve.count_formula(q, i).total:
                wrong.append((q, i, n))
    assert wrong == []
    spots = {(2, 2): 5, (3, 3): 28, (4, 3): 81}
    for (q, i), expected in spots.items():
        assert len(curve.enumerate_parametric(build_tower(q, i))) == expected
        assert curve.count_formula(q, i).total == expected
    assert curve.count_formula(101, 3).total == 2_040_000


@pytest.mark.criterion(3, "surface: parametric equals brute force with matching totals and zero patterns, q <= 9")
def test_surface_oracle_and_counts():
    start = time.monotonic()
    totals = {2: 21, 3: 100, 4: 369, 5: 1112, 7: 4572}
    for q in SURFACE_QS:
        t = build_tower(q, 2)
        param = surface.enumerate_surface(t)
        brute = surface.enumerate_surface_brute(t)
        assert param == brute, q
        formula = surface.surface_count_formula(q)
        assert len(brute) == formula.total
        if q in totals:
            assert len(brute) == totals[q]
        m = q - 1
        zp = brute.zero_pattern_counts()
        assert zp["two-zero"] == 6 * m
        assert zp["one-zero"] == {2: 8 * m * m, 1: 0, 0: 4 * m * m}[q % 3]
        assert zp == formula.by_zero_pattern
    assert time.monotonic() - start < 300


@pytest.mark.criterion(4, "cube property of coordinate products on every curve point, q <= 16")
def test_cube_property():
    failed = [
        (q, i) for q in prime_powers(16) for i in (1, 2, 3)
        if verify.check_cube_corollary(build_tower(q, i)).violation_count
    ]
    assert failed == []


@pytest.mark.criterion(5, "square property of coordinate products on every surface point, q <= 9")
def test_square_property():
    failed = [q for q in prime_powers(9) if verify.check_square_corollary(build_tower(q, 2)).violation_count]
    assert failed == []


@pytest.mark.criterion(6, "GF(16) has u + v + w = 0 with uvw of multiplicative order 15")
def test_degree_four_counterexample():
    w = verify.remark_counterexample()
    assert w is not None
    fld = build_field(2, 4)
    assert fld.add(fld.add(w["u"], w["v"]), w["w"]) == 0
    assert fld.mult_order(fld.mul(fld.mul(w["u"], w["v"]), w["w"])) == 15


@pytest.mark.criterion(7, "factorization identities: norm-1 cubic (q <= 16), surface triple product (q <= 9), symmetric (Q <= 81)")
def test_factorization_identities():
    for q in prime_powers(16):
        r = verify.check_factorization_cubic(build_tower(q, 3))
        assert r.violation_count == 0 and r.instances == q * q + q + 1, q
    for q in prime_powers(9):
        assert verify.check_factorization_surface(build_tower(q, 2)).violation_count == 0, q
    for Q in prime_powers(81):
        pp = build_tower(Q, 1).pp
        fld = build_field(pp.p, pp.r)
        r = verify.check_symmetric_identity(fld, pp.p, pp.r)
        assert r.detail["mode"] == "exhaustive" and r.instances == Q**3
        assert r.violation_count == 0, Q


def _axioms_hold(fld) -> bool:
    e = np.arange(fld.order, dtype=np.int64)
    b, c = (g.ravel() for g in np.meshgrid(e, e, indexing="ij"))
    for a in range(fld.order):
        A = np.full(len(b), a, dtype=np.int64)
        if not (
            np.array_equal(fld.vmul(fld.vmul(A, b), c), fld.vmul(A, fld.vmul(b, c)))
            and np.array_equal(fld.vadd(fld.vadd(A, b), c), fld.vadd(A, fld.vadd(b, c)))
            and np.array_equal(fld.vmul(A, fld.vadd(b, c)), fld.vadd(fld.vmul(A, b), fld.vmul(A, c)))
        ):
            return False
    units = e[1:]
    return bool(np.all(fld.vmul(units, fld.vinv(units)) == 1) and np.all(fld.vadd(e, fld.vneg(e)) == 0))


def _frobenius_ok(t) -> bool:
    x = np.arange(t.top.order, dtype=np.int64)
    fx = t.vfrobenius(x)
    it = x
    for _ in range(t.i):
        it = t.vfrobenius(it)
    return (
        np.array_equal(fx, t.top.vpow(x, t.q))
        and np.array_equal(t.vfrobenius(t.subfield), t.subfield)
        and int((fx == x).sum()) == t.q
        and np.array_equal(it, x)
    )


@pytest.mark.criterion(8, "structure: |ker T| = q^2 (q <= 64), gcd rule (q <= 10^4), field axioms, Frobenius")
def test_structural_invariants():
    assert [q for q in prime_powers(64) if len(t_kernel(build_tower(q, 3))) != q * q] == []
    for q in prime_powers(10_000):
        assert gcd_helper(q) == (3 * (q - 1) if q % 3 == 1 else q - 1), q
    for Q in prime_powers(256):
        pp = build_tower(Q, 1).pp
        assert _axioms_hold(build_field(pp.p, pp.r)), Q
    rng = np.random.default_rng(1)
    for p, n in [(2, 12), (3, 9), (5, 6), (101, 3), (65521, 1)]:
        fld = build_field(p, n)
        a, b, c = rng.integers(0, fld.order, size=(3, 10_000))
        assert np.array_equal(fld.vmul(fld.vmul(a, b), c), fld.vmul(a, fld.vmul(b, c)))
        assert np.array_equal(fld.vmul(a, fld.vadd(b, c)), fld.vadd(fld.vmul(a, b), fld.vmul(a, c)))
    towers = [(q, i) for q in prime_powers(64) for i in (1, 2, 3, 4) if q**i <= 2**16]
    assert [(q, i) for q, i in towers if not _frobenius_ok(build_tower(q, i))] == []


@pytest.mark.criterion(9, "q = 101, i = 3: parametric run under 30 s matches the formula; brute force is refused")
def test_large_parametric_run():
    t = build_tower(101, 3)
    start = time.monotonic()
    pts = curve.enumerate_parametric(t)
    elapsed = time.monotonic() - start
    print(f"q=101 i=3: {len(pts)} points in {elapsed:.1f}s")
    assert elapsed < 30
    assert len(pts) == curve.count_formula(101, 3).total == 2_040_000
    with pytest.raises(BudgetExceeded) as err:
        curve.enumerate_brute(t.top, 100)
    assert err.value.representatives == representative_count(101**3, 3) > 10**12
