"""Executable checks of the point descriptions, counting formulas and product corollaries.

Every check returns a ``VerifyReport``.  Violations are data: each witness is a
small JSON-able dict that ``replay`` can re-test on its own.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from itertools import product

import numpy as np

from . import curve, surface
from .gfcore import FieldCtx, TowerCtx, build_field, build_tower, prime_powers
from .points import BudgetExceeded, PointSet, default_budget, representative_count

MAX_WITNESSES = 16
SYMMETRIC_EXHAUSTIVE_LIMIT = 81
SCALING_EXHAUSTIVE_LIMIT = 1024


@dataclass
class VerifyReport:
    q: int
    i: int
    check: str
    instances: int
    violations: list[dict] = field(default_factory=list)
    violation_count: int = 0
    detail: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "pass" if self.violation_count == 0 else "fail"

    def to_json(self) -> str:
        d = asdict(self)
        d["verdict"] = self.verdict
        return json.dumps(d, sort_keys=True, separators=(",", ":"))


def _report(q, i, check, instances, bad_rows: list[dict], detail=None) -> VerifyReport:
    return VerifyReport(q, i, check, instances, bad_rows[:MAX_WITNESSES], len(bad_rows), detail or {})


def _coord_witnesses(coords: np.ndarray, **extra) -> list[dict]:
    return [{"coords": row, **extra} for row in coords.tolist()]


def _product(fld: FieldCtx, coords: np.ndarray) -> np.ndarray:
    out = coords[:, 0]
    for j in range(1, coords.shape[1]):
        out = fld.vmul(out, coords[:, j])
    return out


def _power_sum(fld: FieldCtx, coords, exponent: int) -> np.ndarray:
    coords = np.asarray(coords, dtype=np.int64).reshape(-1, np.shape(coords)[-1])
    total = np.zeros(len(coords), dtype=np.int64)
    for j in range(coords.shape[1]):
        total = fld.vadd(total, fld.vpow(coords[:, j], exponent))
    return total


# ---------------------------------------------------------------------------
# corollaries on products of coordinates


def check_cube_corollary(t: TowerCtx, pts: PointSet | None = None) -> VerifyReport:
    if not 1 <= t.i <= 3:
        raise ValueError("the cube property is claimed for i in 1..3")
    pts = curve.enumerate_parametric(t) if pts is None else pts
    ok = t.top.nth_power_mask(_product(t.top, pts.coords), 3)
    return _report(t.q, t.i, "cube-corollary", len(pts), _coord_witnesses(pts.coords[~ok]))


def check_square_corollary(t: TowerCtx, pts: PointSet | None = None) -> VerifyReport:
    pts = surface.enumerate_surface(t) if pts is None else pts
    ok = t.top.nth_power_mask(_product(t.top, pts.coords), 2)
    return _report(t.q, t.i, "square-corollary", len(pts), _coord_witnesses(pts.coords[~ok]))


def check_scaling_lemma(fld: FieldCtx, q: int, i: int) -> VerifyReport:
    """lambda^3 y is a cube iff y is, and lambda^4 y is a square iff y is, for all lambda, y."""
    if fld.order > SCALING_EXHAUSTIVE_LIMIT:
        raise ValueError("scaling lemma is checked exhaustively only on small fields")
    lam, y = (g.ravel() for g in np.meshgrid(np.arange(1, fld.order), np.arange(fld.order), indexing="ij"))
    bad = []
    for k, n in ((3, 3), (4, 2)):
        scaled = fld.vmul(fld.vpow(lam, k), y)
        diff = fld.nth_power_mask(scaled, n) != fld.nth_power_mask(y, n)
        bad += [{"lambda": int(a), "y": int(b), "k": k, "n": n} for a, b in zip(lam[diff], y[diff])]
    return _report(q, i, "scaling-lemma", 2 * len(lam), bad)


# ---------------------------------------------------------------------------
# the two factorization identities


def _norm_one(t: TowerCtx) -> np.ndarray:
    units = np.arange(1, t.top.order, dtype=np.int64)
    q = t.q
    return units[t.top.vpow(units, q * q + q + 1) == 1]


def cubic_factorization_sides(t: TowerCtx, vals) -> tuple[np.ndarray, np.ndarray]:
    """(V+1)^(q^2+q+1) + 1 and (V^(q+1)+V+1)(V^(-q-1)+V^(-1)+1)."""
    fld, q = t.top, t.q
    v = np.asarray(vals, dtype=np.int64)
    one = np.ones_like(v)
    lhs = fld.vadd(fld.vpow(fld.vadd(v, one), q * q + q + 1), one)
    vi = fld.vinv(v)
    left = fld.vadd(fld.vadd(fld.vpow(v, q + 1), v), one)
    right = fld.vadd(fld.vadd(fld.vpow(vi, q + 1), vi), one)
    return lhs, fld.vmul(left, right)


def check_factorization_cubic(t: TowerCtx) -> VerifyReport:
    if t.i != 3:
        raise ValueError("the cubic factorization lives in GF(q^3)")
    vals = _norm_one(t)
    lhs, rhs = cubic_factorization_sides(t, vals)
    bad = [{"V": int(v)} for v in vals[lhs != rhs]]
    return _report(t.q, 3, "cubic-factorization", len(vals), bad, {"norm_one_elements": len(vals)})


def symmetric_identity_sides(fld: FieldCtx, a, b, c) -> tuple[np.ndarray, np.ndarray]:
    """(A+B)(A+C)(B+C) and (A+B+C)(AB+BC+CA) - ABC."""
    add, mul = fld.vadd, fld.vmul
    lhs = mul(mul(add(a, b), add(a, c)), add(b, c))
    e2 = add(add(mul(a, b), mul(b, c)), mul(c, a))
    rhs = fld.vsub(mul(add(add(a, b), c), e2), mul(mul(a, b), c))
    return lhs, rhs


def check_symmetric_identity(fld: FieldCtx, q: int, i: int, samples: int = 10_000, seed: int = 0) -> VerifyReport:
    if fld.order <= SYMMETRIC_EXHAUSTIVE_LIMIT:
        el = np.arange(fld.order, dtype=np.int64)
        a, b, c = (g.ravel() for g in np.meshgrid(el, el, el, indexing="ij"))
        mode = "exhaustive"
    else:
        rng = np.random.default_rng(seed)
        small = np.arange(min(10, fld.order), dtype=np.int64)
        grid = [g.ravel() for g in np.meshgrid(small, small, small, indexing="ij")]
        rand = rng.integers(0, fld.order, size=(3, samples), dtype=np.int64)
        a, b, c = (np.concatenate([grid[k], rand[k]]) for k in range(3))
        mode = "sampled"
    lhs, rhs = symmetric_identity_sides(fld, a, b, c)
    bad_idx = np.nonzero(lhs != rhs)[0]
    bad = [{"A": int(a[k]), "B": int(b[k]), "C": int(c[k])} for k in bad_idx]
    return _report(q, i, "symmetric-identity", len(a), bad, {"mode": mode})


def triple_product(fld: FieldCtx, coords: np.ndarray, exponent: int) -> np.ndarray:
    """(A+B)(A+C)(B+C) for A, B, C the e-th powers of the first three coordinates."""
    a, b, c = (fld.vpow(coords[:, j], exponent) for j in range(3))
    return fld.vmul(fld.vmul(fld.vadd(a, b), fld.vadd(a, c)), fld.vadd(b, c))


def check_factorization_surface(t: TowerCtx, pts: PointSet | None = None) -> VerifyReport:
    if t.i != 2:
        raise ValueError("the surface factorization lives in GF(q^2)")
    pts = surface.enumerate_surface(t) if pts is None else pts
    nz = pts.coords[(pts.coords != 0).all(axis=1)]
    bad = triple_product(t.top, nz, t.q - 1) != 0
    return _report(t.q, 2, "surface-factorization", len(nz), _coord_witnesses(nz[bad]))


# ---------------------------------------------------------------------------
# point sets against the exhaustive oracle and the closed forms


def _oracle_report(q, i, check, param: PointSet, brute: PointSet) -> VerifyReport:
    ps, bs = param.keyset(), brute.keyset()
    bad = [{"coords": list(c), "in_parametric": c in ps, "in_brute": c in bs} for c in sorted(ps ^ bs)]
    return _report(q, i, check, len(ps | bs), bad, {"parametric": len(ps), "brute": len(bs)})


def _count_report(q, i, check, formula: curve.CurveCount, pts: PointSet, brute: PointSet | None = None) -> VerifyReport:
    observed = {"total": len(pts), "by_zero_pattern": pts.zero_pattern_counts()}
    expected = {"total": formula.total, "by_zero_pattern": {k: formula.by_zero_pattern.get(k, 0) for k in observed["by_zero_pattern"]}}
    bad = []
    if observed != expected:
        bad.append({"source": "parametric", "formula": expected, "observed": observed})
    if brute is not None:
        b_obs = {"total": len(brute), "by_zero_pattern": brute.zero_pattern_counts()}
        if b_obs != expected:
            bad.append({"source": "brute", "formula": expected, "observed": b_obs})
    return _report(q, i, check, 1, bad, {"formula": expected, "source": formula.source})


def check_curve(t: TowerCtx, budget: int | None = None, workers: int = 1) -> list[VerifyReport]:
    q, i = t.q, t.i
    param = curve.enumerate_parametric(t)
    brute = curve.enumerate_brute(t.top, q - 1, budget=budget, workers=workers)
    reports = [
        _oracle_report(q, i, "curve-oracle", param, brute),
        _count_report(q, i, "curve-count", curve.count_formula(t.pp, i), param, brute),
        check_cube_corollary(t, param),
    ]
    if t.top.order <= SCALING_EXHAUSTIVE_LIMIT:
        reports.append(check_scaling_lemma(t.top, q, i))
    if i == 3:
        reports.append(check_curve_overlap(t))
        reports.append(check_factorization_cubic(t))
    return reports


def check_surface(t: TowerCtx, budget: int | None = None, workers: int = 1) -> list[VerifyReport]:
    q = t.q
    param = surface.enumerate_surface(t)
    brute = surface.enumerate_surface_brute(t, budget=budget, workers=workers)
    return [
        _oracle_report(q, 2, "surface-oracle", param, brute),
        _count_report(q, 2, "surface-count", surface.surface_count_formula(t.pp), param, brute),
        check_square_corollary(t, param),
        check_factorization_surface(t, param),
    ]


# ---------------------------------------------------------------------------
# the degree-4 remark


def remark_counterexample() -> dict | None:
    """First (u, v, w) in GF(16)^3, in canonical order, with u+v+w = 0 and uvw of order 15."""
    fld = build_field(2, 4)
    for u, v, w in product(range(16), repeat=3):
        if fld.add(fld.add(u, v), w) != 0:
            continue
        prod = fld.mul(fld.mul(u, v), w)
        if prod and fld.mult_order(prod) == 15:
            return {"u": u, "v": v, "w": w, "product": prod, "order": 15}
    return None


def noncube_points(q: int, i: int, budget: int | None = None) -> list[tuple[int, int, int]]:
    """Curve points over GF(q^i) whose coordinate product is not a cube (canonical representatives)."""
    t = build_tower(q, i)
    pts = curve.enumerate_brute(t.top, q - 1, budget=budget)
    ok = t.top.nth_power_mask(_product(t.top, pts.coords), 3)
    return [tuple(r) for r in pts.coords[~ok].tolist()]


def check_remark() -> VerifyReport:
    w = remark_counterexample()
    bad = [] if w is not None else [{"witness": None}]
    return _report(2, 4, "remark-counterexample", 16**3, bad, {"witness": w})


# ---------------------------------------------------------------------------


def replay(report: VerifyReport, witness: dict) -> bool:
    """Re-test one witness in isolation; True means it still violates the check."""
    q, i = report.q, report.i
    name = report.check
    if name == "remark-counterexample":
        return remark_counterexample() is None
    t = build_tower(q, i)
    fld = t.top
    if name in ("cube-corollary", "square-corollary"):
        c = np.array([witness["coords"]], dtype=np.int64)
        n = 3 if name == "cube-corollary" else 2
        return not bool(fld.nth_power_mask(_product(fld, c), n)[0])
    if name == "cubic-factorization":
        lhs, rhs = cubic_factorization_sides(t, [witness["V"]])
        return bool(lhs[0] != rhs[0])
    if name == "symmetric-identity":
        lhs, rhs = symmetric_identity_sides(fld, *(np.array([witness[k]]) for k in "ABC"))
        return bool(lhs[0] != rhs[0])
    if name == "surface-factorization":
        return bool(triple_product(fld, np.array([witness["coords"]]), q - 1)[0] != 0)
    if name == "scaling-lemma":
        lam, y, k, n = witness["lambda"], witness["y"], witness["k"], witness["n"]
        scaled = fld.mul(fld.pow(lam, k), y)
        return bool(fld.nth_power_mask([scaled], n)[0] != fld.nth_power_mask([y], n)[0])
    if name in ("curve-oracle", "surface-oracle"):
        coords = tuple(witness["coords"])
        on_variety = bool(_power_sum(fld, [coords], q - 1)[0] == 0)
        param = curve.enumerate_parametric(t) if name == "curve-oracle" else surface.enumerate_surface(t)
        return on_variety != (coords in param)
    if name in ("curve-count", "surface-count", "cubic-overlap"):
        fresh = {
            "curve-count": lambda: _count_report(q, i, name, curve.count_formula(t.pp, i), curve.enumerate_parametric(t)),
            "surface-count": lambda: _count_report(q, i, name, surface.surface_count_formula(t.pp), surface.enumerate_surface(t)),
            "cubic-overlap": lambda: check_curve_overlap(t),
        }[name]()
        return fresh.violation_count > 0
    raise ValueError(f"unknown check {name!r}")


def check_curve_overlap(t: TowerCtx) -> VerifyReport:
    ov = curve.cubic_overlap(t)
    bad = [] if (ov["shared_roots"], ov["shared_points"]) == (ov["expected_shared_roots"], ov["expected_shared_points"]) else [ov]
    return _report(t.q, 3, "cubic-overlap", 1, bad, ov)


def brute_cost(q_max: int) -> int:
    """Largest single brute-force scan full_report would run."""
    worst = 0
    for q in prime_powers(q_max):
        worst = max(worst, representative_count(q**3, 3), representative_count(q**2, 4))
    return worst


def full_report(q_max: int, budget: int | None = None, workers: int = 1) -> list[VerifyReport]:
    """Every check for every prime power q <= q_max, ordered by (q, check, i)."""
    budget = default_budget() if budget is None else budget
    need = brute_cost(q_max)
    if need > budget:
        raise BudgetExceeded(need, budget)
    reports: list[VerifyReport] = []
    for q in prime_powers(q_max):
        for i in (1, 2, 3):
            reports += check_curve(build_tower(q, i), budget=budget, workers=workers)
        t2 = build_tower(q, 2)
        reports += check_surface(t2, budget=budget, workers=workers)
        reports.append(check_symmetric_identity(t2.top, q, 2))
    if q_max >= 2:
        reports.append(check_remark())
    reports.sort(key=lambda r: (r.q, r.check, r.i))
    return reports
