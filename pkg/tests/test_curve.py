import itertools
import json

import numpy as np
import pytest

from fermatpts import curve
from fermatpts.gfcore import build_tower, gcd_helper, prime_powers
from fermatpts.points import BudgetExceeded, ParametrizationError, PointSet, ProjPoint, normalize


def on_curve(fld, coords, e):
    # scalar evaluation, independent of the vectorized code paths
    total = 0
    for c in coords:
        total = fld.add(total, fld.pow(c, e))
    return total == 0


def projective_points(fld, k):
    """Canonical representatives of P^(k-1), generated directly."""
    for lead in range(k):
        for tail in itertools.product(range(fld.order), repeat=k - 1 - lead):
            yield (0,) * lead + (1,) + tail


def scan_by_hand(q, i):
    t = build_tower(q, i)
    return {pt for pt in projective_points(t.top, 3) if on_curve(t.top, pt, q - 1)}


# -- per-field examples ---------------------------------------------------------


def test_base_q2():
    pts = curve.enumerate_base(build_tower(2, 1))
    assert pts.keyset() == {(0, 1, 1), (1, 0, 1), (1, 1, 0)}


def test_base_q3():
    pts = curve.enumerate_base(build_tower(3, 1))
    assert pts.keyset() == {(1, 1, 1), (1, 1, 2), (1, 2, 1), (1, 2, 2)}
    assert len(pts) == 4 == scan_by_hand(3, 1).__len__()


def test_base_q5_empty():
    assert len(curve.enumerate_base(build_tower(5, 1))) == 0


def test_quadratic_examples():
    pts = curve.enumerate_quadratic(build_tower(2, 2))
    assert len(pts) == 5
    assert pts.keyset() == scan_by_hand(2, 2)
    assert len(curve.enumerate_quadratic(build_tower(3, 2))) == 10
    pts7 = curve.enumerate_quadratic(build_tower(7, 2))
    assert len(pts7) == 18
    assert all((np.array(p.coords) == 0).sum() == 1 for p in pts7)


def test_cubic_examples():
    assert len(curve.enumerate_cubic(build_tower(2, 3))) == 9
    assert len(curve.enumerate_cubic(build_tower(3, 3))) == 28
    assert len(curve.enumerate_cubic(build_tower(4, 3))) == 81


def test_brute_examples():
    t = build_tower(2, 1)
    assert curve.enumerate_brute(t.top, 1) == curve.enumerate_base(t)
    t = build_tower(3, 2)
    brute = curve.enumerate_brute(t.top, 2)
    assert len(brute) == 10 and brute == curve.enumerate_quadratic(t)
    assert len(curve.enumerate_brute(build_tower(5, 1).top, 4)) == 0


@pytest.mark.parametrize("q, i", [(2, 2), (3, 2), (4, 2), (5, 2), (2, 3), (3, 3), (4, 3)])
def test_brute_scanner_matches_hand_scan(q, i):
    t = build_tower(q, i)
    assert curve.enumerate_brute(t.top, q - 1).keyset() == scan_by_hand(q, i)


def test_wrong_extension_rejected():
    with pytest.raises(ValueError):
        curve.enumerate_quadratic(build_tower(3, 3))
    with pytest.raises(ValueError):
        curve.enumerate_cubic(build_tower(3, 2))
    with pytest.raises(ValueError):
        curve.enumerate_base(build_tower(3, 2))


# -- count formulas -------------------------------------------------------------


@pytest.mark.parametrize("q, i, expected", [
    (2, 2, 5),
    (101, 3, 2_040_000),
    (7, 1, 0),
    (3, 3, 28),
    (4, 3, 81),
    (3, 1, 4),
    (2, 1, 3),
])
def test_count_formula_examples(q, i, expected):
    assert curve.count_formula(q, i).total == expected


def test_count_formula_marks_lemma_values():
    assert curve.count_formula(9, 1).source == "lemma-derived"
    assert curve.count_formula(9, 2).source == "formula"


def test_curve_count_invariant():
    with pytest.raises(ValueError):
        curve.CurveCount(5, 2, 10, {"one-zero": 3, "no-zero": 3})


# -- properties -----------------------------------------------------------------

SMALL = [(q, i) for q in prime_powers(16) for i in (1, 2, 3) if q**i <= 4096]


@pytest.mark.parametrize("q, i", SMALL)
def test_parametric_equals_brute(q, i):
    t = build_tower(q, i)
    param = curve.enumerate_parametric(t)
    assert param == curve.enumerate_brute(t.top, q - 1)
    assert len(param) == curve.count_formula(q, i).total


@pytest.mark.parametrize("q, i", SMALL + [(32, 2), (27, 3)])
def test_every_emitted_point_is_on_curve(q, i):
    t = build_tower(q, i)
    for pt in curve.enumerate_parametric(t):
        assert on_curve(t.top, pt.coords, q - 1)
        lead = next(c for c in pt.coords if c)
        assert lead == 1


@pytest.mark.parametrize("q, i", [(q, i) for q, i in SMALL if q**i <= 2**12])
def test_representatives_unique_under_scaling(q, i):
    # the scaling orbits of distinct emitted points must be pairwise disjoint
    t = build_tower(q, i)
    fld = t.top
    pts = curve.enumerate_parametric(t)
    units = np.arange(1, fld.order, dtype=np.int64)
    orbits = fld.vmul(units[None, :, None], pts.coords[:, None, :]).reshape(-1, 3)
    keys = (orbits[:, 0] * fld.order + orbits[:, 1]) * fld.order + orbits[:, 2]
    assert len(np.unique(keys)) == len(keys) == len(pts) * (fld.order - 1)


@pytest.mark.parametrize("q", prime_powers(64))
def test_cubic_overlap_follows_gcd(q):
    ov = curve.cubic_overlap(build_tower(q, 3))
    g = gcd_helper(q)
    if q % 3 == 1:
        assert ov["shared_roots"] == 2 * (q - 1) == g - (q - 1)
    elif q % 3 == 0:
        assert ov["shared_roots"] == q - 1 == g
    else:
        assert ov["shared_roots"] == 0
    assert ov["shared_points"] == ov["shared_roots"] * (q - 1)


def test_overlap_mismatch_is_raised(monkeypatch):
    t = build_tower(7, 3)
    real = curve.cubic_families

    def broken(tower):
        fams = real(tower)
        fams["T3-case2"] = fams["T3-case1"].copy()  # a bug that set semantics would hide
        return fams

    monkeypatch.setattr(curve, "cubic_families", broken)
    with pytest.raises(ParametrizationError):
        curve.enumerate_cubic(t)


def test_provenance_tags():
    pts = curve.enumerate_cubic(build_tower(4, 3))
    counts = pts.provenance_counts()
    assert set(counts) == {"T3-case1", "T3-case2", "T3-case3"}
    assert counts["T3-case3"] == 9
    pts = curve.enumerate_quadratic(build_tower(9, 2))
    assert pts.provenance_counts()["T2-case2"] == 64


@pytest.mark.parametrize("q", prime_powers(128))
def test_count_agreement_i12(q):
    for i in (1, 2):
        t = build_tower(q, i)
        pts = curve.enumerate_parametric(t)
        f = curve.count_formula(q, i)
        assert len(pts) == f.total
        assert curve.count_points(pts, q, i, "parametric").by_zero_pattern == f.by_zero_pattern


# -- point-set plumbing ---------------------------------------------------------------


def test_projpoint_equality_ignores_provenance():
    assert ProjPoint((1, 2, 3), "T3-case1") == ProjPoint((1, 2, 3), "brute")
    assert len({ProjPoint((1, 2, 3), "a"), ProjPoint((1, 2, 3), "b")}) == 1


def test_normalize():
    fld = build_tower(5, 1).top
    out = normalize(fld, np.array([[0, 2, 4], [3, 0, 3]]))
    assert out.tolist() == [[0, 1, 2], [1, 0, 1]]
    with pytest.raises(ValueError):
        normalize(fld, np.array([[0, 0, 0]]))


def test_json_lines_schema():
    t = build_tower(4, 2)
    pts = curve.enumerate_quadratic(t)
    lines = list(pts.json_lines())
    assert len(lines) == len(pts)
    obj = json.loads(lines[0])
    assert set(obj) == {"coords", "provenance"}
    assert len(obj["coords"]) == 3 and all(len(c) == 4 for c in obj["coords"])
    decoded = [tuple(t.top.from_coeffs(c) for c in json.loads(l)["coords"]) for l in lines]
    assert decoded == sorted(decoded) == [p.coords for p in pts]


def test_brute_budget_guard():
    t = build_tower(5, 2)
    with pytest.raises(BudgetExceeded) as err:
        curve.enumerate_brute(t.top, 4, budget=100)
    assert err.value.representatives == 25**2 + 25 + 1


def test_brute_budget_env(monkeypatch):
    monkeypatch.setenv("FERMATPTS_BUDGET", "10")
    with pytest.raises(BudgetExceeded):
        curve.enumerate_brute(build_tower(3, 1).top, 2)


def test_brute_workers_same_result():
    t = build_tower(8, 2)
    assert curve.enumerate_brute(t.top, 7, workers=2) == curve.enumerate_brute(t.top, 7)
