"""Projective point sets and the exhaustive diagonal-hypersurface scanner.

A point set is held as an (N, k) int64 array of canonical representatives
(leftmost nonzero coordinate scaled to 1), sorted lexicographically in the
canonical element order, plus a provenance tag per row.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .gfcore import FieldCtx

DEFAULT_BUDGET = 1 << 25
BUDGET_ENV = "FERMATPTS_BUDGET"
SCAN_CHUNK = 1 << 20

ZERO_PATTERNS = {0: "no-zero", 1: "one-zero", 2: "two-zero", 3: "three-zero"}


class BudgetExceeded(RuntimeError):
    def __init__(self, representatives: int, budget: int):
        self.representatives = representatives
        self.budget = budget
        super().__init__(
            f"brute-force scan needs {representatives} projective representatives, "
            f"over the budget of {budget}"
        )


class ParametrizationError(AssertionError):
    """A parametric family disagreed with its structural cross-check."""


def default_budget() -> int:
    value = os.environ.get(BUDGET_ENV)
    if value is None:
        return DEFAULT_BUDGET
    budget = int(value)
    if budget <= 0:
        raise ValueError(f"{BUDGET_ENV} must be positive")
    return budget


def representative_count(order: int, ncoords: int) -> int:
    """|P^(k-1)(GF(order))| = (order^k - 1) / (order - 1)."""
    return (order**ncoords - 1) // (order - 1)


@dataclass(frozen=True)
class ProjPoint:
    coords: tuple[int, ...]
    provenance: str = field(default="brute", compare=False)

    def to_json(self, fld: FieldCtx) -> dict:
        return {"coords": [fld.to_coeffs(c) for c in self.coords], "provenance": self.provenance}


def normalize(fld: FieldCtx, coords: np.ndarray) -> np.ndarray:
    coords = np.asarray(coords, dtype=np.int64)
    nz = coords != 0
    if not nz.any(axis=1).all():
        raise ValueError("the all-zero tuple is not a projective point")
    lead = coords[np.arange(len(coords)), nz.argmax(axis=1)]
    return fld.vmul(coords, fld.vinv(lead)[:, None])


def _row_keys(coords: np.ndarray, order: int) -> np.ndarray | None:
    k = coords.shape[1]
    if order**k >= 1 << 63:
        return None
    key = np.zeros(len(coords), dtype=np.int64)
    for j in range(k):
        key = key * order + coords[:, j]
    return key


class PointSet:
    """Deduplicated projective points over ``field``; equality ignores provenance."""

    def __init__(self, fld: FieldCtx, coords: np.ndarray, tags: Sequence[str], tag_index: np.ndarray):
        self.field = fld
        self.coords = coords
        self.tags = tuple(tags)
        self.tag_index = tag_index

    @classmethod
    def from_families(cls, fld: FieldCtx, ncoords: int, families: Iterable[tuple[str, np.ndarray]]) -> PointSet:
        """Normalize and merge families; a duplicate keeps the tag of the earliest family."""
        tags, parts, idx = [], [], []
        for tag, coords in families:
            coords = np.asarray(coords, dtype=np.int64).reshape(-1, ncoords)
            if tag not in tags:
                tags.append(tag)
            if len(coords):
                parts.append(normalize(fld, coords))
                idx.append(np.full(len(coords), tags.index(tag), dtype=np.int64))
        if not parts:
            return cls(fld, np.zeros((0, ncoords), dtype=np.int64), tags, np.zeros(0, dtype=np.int64))
        allc = np.concatenate(parts)
        alli = np.concatenate(idx)
        keys = _row_keys(allc, fld.order)
        if keys is not None:
            _, first = np.unique(keys, return_index=True)
        else:
            _, first = np.unique(allc, axis=0, return_index=True)
        return cls(fld, allc[first], tags, alli[first])

    def __len__(self):
        return len(self.coords)

    def __iter__(self) -> Iterator[ProjPoint]:
        for row, ti in zip(self.coords.tolist(), self.tag_index.tolist()):
            yield ProjPoint(tuple(row), self.tags[ti])

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.coords, other.coords)

    def __contains__(self, point):
        coords = point.coords if isinstance(point, ProjPoint) else tuple(point)
        return coords in self.keyset()

    def keyset(self) -> set[tuple[int, ...]]:
        return set(map(tuple, self.coords.tolist()))

    def as_set(self) -> set[ProjPoint]:
        return set(self)

    def select(self, tag: str) -> np.ndarray:
        if tag not in self.tags:
            return self.coords[:0]
        return self.coords[self.tag_index == self.tags.index(tag)]

    def provenance_counts(self) -> dict[str, int]:
        counts = np.bincount(self.tag_index, minlength=len(self.tags))
        return {t: int(c) for t, c in zip(self.tags, counts)}

    def zero_pattern_counts(self) -> dict[str, int]:
        zeros = (self.coords == 0).sum(axis=1)
        counts = np.bincount(zeros, minlength=self.coords.shape[1])
        return {ZERO_PATTERNS[z]: int(counts[z]) for z in range(self.coords.shape[1])}

    def json_lines(self) -> Iterator[str]:
        import json

        for pt in self:
            yield json.dumps(pt.to_json(self.field), separators=(",", ":"))


# ---------------------------------------------------------------------------
# Exhaustive scan of x_1^e + ... + x_k^e = 0 over canonical representatives.


def power_table(fld: FieldCtx, exponent: int) -> np.ndarray:
    return fld.vpow(np.arange(fld.order, dtype=np.int64), exponent)


def power_fiber(fld: FieldCtx, exponent: int, target: int) -> np.ndarray:
    """Sorted units x with x^exponent = target."""
    units = np.arange(1, fld.order, dtype=np.int64)
    return units[fld.vpow(units, exponent) == target]


def _scan_range(fld: FieldCtx, table: np.ndarray, ncoords: int, lead: int, start: int, stop: int) -> np.ndarray:
    """Zeros of the diagonal form among representatives (0,..,0,1,x_1..x_m) with tail index in [start, stop)."""
    order = fld.order
    m = ncoords - 1 - lead
    idx = np.arange(start, stop, dtype=np.int64)
    tail = np.empty((len(idx), m), dtype=np.int64)
    for j in range(m - 1, -1, -1):
        tail[:, j] = idx % order
        idx //= order
    total = np.ones(len(tail), dtype=np.int64)
    for j in range(m):
        total = fld.vadd(total, table[tail[:, j]])
    hits = tail[total == 0]
    out = np.zeros((len(hits), ncoords), dtype=np.int64)
    out[:, lead] = 1
    out[:, lead + 1:] = hits
    return out


def _scan_job(args):
    return _scan_range(*args)


def scan_fermat(
    fld: FieldCtx,
    exponent: int,
    ncoords: int,
    budget: int | None = None,
    workers: int = 1,
) -> PointSet:
    """All projective points with x_1^e + ... + x_k^e = 0, by direct evaluation."""
    budget = default_budget() if budget is None else budget
    need = representative_count(fld.order, ncoords)
    if need > budget:
        raise BudgetExceeded(need, budget)
    table = power_table(fld, exponent)
    jobs = []
    for lead in range(ncoords):
        size = fld.order ** (ncoords - 1 - lead)
        for start in range(0, size, SCAN_CHUNK):
            jobs.append((fld, table, ncoords, lead, start, min(size, start + SCAN_CHUNK)))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_scan_job, jobs))
    else:
        parts = [_scan_range(*job) for job in jobs]
    return PointSet.from_families(fld, ncoords, [("brute", np.concatenate(parts))])
