"""Points of u^(q-1) + v^(q-1) + w^(q-1) + x^(q-1) = 0 in P^3(GF(q^2))."""

from __future__ import annotations

from itertools import permutations

import numpy as np

from .curve import CurveCount
from .gfcore import PrimePower, TowerCtx, cube_roots_of_unity
from .points import ParametrizationError, PointSet, power_fiber, scan_fermat

# index pairs {i, j}, {k, l} for the three ways to split four coordinates into pairs
PAIRINGS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))


def _check_quadratic(t: TowerCtx):
    if t.i != 2:
        raise ValueError("the surface is studied over GF(q^2); need i = 2")


def negation_set(t: TowerCtx) -> np.ndarray:
    """Sorted {s in GF(q^2)* : s^(q-1) = -1}; this is GF(q)* when q is even."""
    _check_quadratic(t)
    s = power_fiber(t.top, t.q - 1, t.top.neg(1))
    if len(s) != t.q - 1:
        raise ParametrizationError(f"negation set has {len(s)} elements, expected {t.q - 1}")
    return s


def line_points(t: TowerCtx, pairing, s: int, r: int) -> np.ndarray:
    """The q^2 + 1 points (a : s a : b : r b), coordinates placed by ``pairing``."""
    top = t.top
    (i, j), (k, l) = pairing
    a = np.concatenate([np.ones(top.order, dtype=np.int64), [0]])
    b = np.concatenate([np.arange(top.order, dtype=np.int64), [1]])
    out = np.empty((len(a), 4), dtype=np.int64)
    out[:, i], out[:, j] = a, top.vmul(a, s)
    out[:, k], out[:, l] = b, top.vmul(b, r)
    return out


def _lines_family(t: TowerCtx) -> np.ndarray:
    top = t.top
    neg = negation_set(t)
    a = np.concatenate([np.ones(top.order, dtype=np.int64), [0]])
    b = np.concatenate([np.arange(top.order, dtype=np.int64), [1]])
    ss, rr, ab = (x.ravel() for x in np.meshgrid(neg, neg, np.arange(len(a)), indexing="ij"))
    av, bv = a[ab], b[ab]
    parts = []
    for (i, j), (k, l) in PAIRINGS:
        out = np.empty((len(ab), 4), dtype=np.int64)
        out[:, i], out[:, j] = av, top.vmul(av, ss)
        out[:, k], out[:, l] = bv, top.vmul(bv, rr)
        parts.append(out)
    return np.concatenate(parts)


def _place_one_zero(zero: int, cols: list[np.ndarray]) -> np.ndarray:
    grids = [g.ravel() for g in np.meshgrid(*cols, indexing="ij")]
    out = np.zeros((len(grids[0]), 4), dtype=np.int64)
    others = [c for c in range(4) if c != zero]
    for c, g in zip(others, grids):
        out[:, c] = g
    return out


def _cube_root_family(t: TowerCtx) -> np.ndarray:
    top, q = t.top, t.q
    classes = [power_fiber(top, q - 1, z) for z in cube_roots_of_unity(top)]
    if len(classes) != 3 or any(len(c) != q - 1 for c in classes):
        raise ParametrizationError("cube-root classes of the (q-1)-th power map are malformed")
    return np.concatenate([
        _place_one_zero(zero, [classes[k] for k in perm])
        for zero in range(4)
        for perm in permutations(range(3))
    ])


def _char3_family(t: TowerCtx) -> np.ndarray:
    c = t.subfield_units
    return np.concatenate([_place_one_zero(zero, [c, c, c]) for zero in range(4)])


def enumerate_surface(t: TowerCtx) -> PointSet:
    _check_quadratic(t)
    q = t.q
    empty = np.zeros((0, 4), dtype=np.int64)
    families = [
        ("S-lines", _lines_family(t)),
        ("S-cubes", _cube_root_family(t) if q % 3 == 2 else empty),
        ("S-char3", _char3_family(t) if q % 3 == 0 else empty),
    ]
    return PointSet.from_families(t.top, 4, families)


def enumerate_surface_brute(t: TowerCtx, budget: int | None = None, workers: int = 1) -> PointSet:
    _check_quadratic(t)
    return scan_fermat(t.top, t.q - 1, 4, budget=budget, workers=workers)


def surface_count_formula(q: int | PrimePower) -> CurveCount:
    pp = q if isinstance(q, PrimePower) else PrimePower.from_int(q)
    q = pp.q
    m = q - 1
    r6 = q % 6
    if r6 == 1:
        total = 3 * m**4 + 3 * m**3 + 6 * m
    elif r6 == 5:
        total = 3 * m**4 + 3 * m**3 + 8 * m**2 + 6 * m
    elif q % 3 == 0:
        total = 3 * m**4 + 3 * m**3 + 4 * m**2 + 6 * m
    elif r6 == 4:
        total = (3 * q + 1) * m**3 + 6 * m
    else:
        total = (3 * q + 1) * m**3 + 8 * m**2 + 6 * m
    one_zero = {0: 4 * m * m, 1: 0, 2: 8 * m * m}[q % 3]
    two_zero = 6 * m
    return CurveCount(
        q, 2, total,
        {"three-zero": 0, "two-zero": two_zero, "one-zero": one_zero, "no-zero": total - two_zero - one_zero},
    )
