"""Finite fields GF(p^n), subfield towers GF(q) < GF(q^i) and the map T(x) = x^(q^2) + x^q + x.

Elements are plain Python ints: the coefficient vector (c_0, ..., c_{n-1}) of
c_0 + c_1 X + ... + c_{n-1} X^{n-1} modulo the defining polynomial is stored
as c_0 + c_1 p + ... + c_{n-1} p^(n-1).  Integer order on these encodings is
the canonical element order (coefficients compared from the highest index
down), so ``range(field.order)`` enumerates the field with zero first.

Scalar operations work for every field under the 63-bit ceiling.  The
vectorized ``v*`` operations act on numpy int64 arrays and need the
exp/log tables, which are only built for fields of at most ``TABLE_LIMIT``
elements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

import numpy as np

SUPPORT_CEILING = 1 << 63
TABLE_LIMIT = 1 << 22


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization of a positive integer."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class PrimePower:
    p: int
    r: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.r < 1:
            raise ValueError("exponent r must be positive")
        if self.p ** (3 * self.r) >= SUPPORT_CEILING:
            raise ValueError(f"q^3 = {self.p}^{3 * self.r} exceeds the 63-bit support ceiling")

    @property
    def q(self) -> int:
        return self.p**self.r

    @classmethod
    def from_int(cls, q: int) -> PrimePower:
        pp = as_prime_power(q)
        if pp is None:
            raise ValueError(f"{q} is not a prime power")
        return cls(*pp)


def as_prime_power(q: int) -> tuple[int, int] | None:
    if q < 2:
        return None
    f = factorize(q)
    if len(f) != 1:
        return None
    ((p, r),) = f.items()
    return p, r


def prime_powers(upto: int) -> list[int]:
    return [q for q in range(2, upto + 1) if as_prime_power(q) is not None]


# ---------------------------------------------------------------------------
# Polynomials over Z_p as little-endian coefficient lists without trailing zeros.


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for k, mk in enumerate(m):
            a[shift + k] = (a[shift + k] - c * mk) % p
        _trim(a)
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _poly_sub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _poly_powmod(a: Sequence[int], e: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(a, m, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), m, p)
        base = _poly_mod(_poly_mul(base, base, p), m, p)
        e >>= 1
    return result


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Ben-Or test: a degree-n f is irreducible iff gcd(f, X^(p^d) - X) = 1 for d <= n/2."""
    f = _trim(list(poly))
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    xp = x
    for _ in range(n // 2):
        xp = _poly_powmod(xp, p, f, p)
        if len(_poly_gcd(f, _poly_sub(xp, x, p), p)) > 1:
            return False
    return True


@lru_cache(maxsize=None)
def least_irreducible(p: int, n: int) -> tuple[int, ...]:
    """Least monic irreducible of degree n over Z_p, ordering the lower
    coefficients like element encodings (highest index most significant)."""
    for code in range(p**n):
        low = [(code // p**k) % p for k in range(n)]
        poly = low + [1]
        if is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError("no irreducible polynomial found")  # unreachable for prime p


# ---------------------------------------------------------------------------


def _inv_matrix_mod(m: np.ndarray, p: int) -> np.ndarray:
    n = m.shape[0]
    a = np.concatenate([m % p, np.eye(n, dtype=np.int64)], axis=1).astype(object)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r, col] % p), None)
        if piv is None:
            raise ValueError("singular matrix")
        a[[col, piv]] = a[[piv, col]]
        a[col] = a[col] * pow(int(a[col, col]), -1, p) % p
        for r in range(n):
            if r != col and a[r, col]:
                a[r] = (a[r] - a[r, col] * a[col]) % p
    return a[:, n:].astype(np.int64)


@dataclass(frozen=True)
class FieldCtx:
    """GF(p^n) modulo a fixed monic irreducible ``poly`` (little-endian, length n+1)."""

    p: int
    n: int
    poly: tuple[int, ...]

    @property
    def order(self) -> int:
        return self.p**self.n

    def __repr__(self):
        return f"GF({self.p}^{self.n})"

    # -- conversion -------------------------------------------------------

    def to_coeffs(self, a: int) -> list[int]:
        return [(a // self.p**k) % self.p for k in range(self.n)]

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) != self.n or any(not 0 <= c < self.p for c in coeffs):
            raise ValueError(f"expected {self.n} coefficients in [0, {self.p - 1}]")
        return sum(c * self.p**k for k, c in enumerate(coeffs))

    def elements(self) -> Iterator[int]:
        return iter(range(self.order))

    def to_json(self) -> dict:
        return {"p": self.p, "n": self.n, "poly": list(self.poly)}

    # -- scalar arithmetic ------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        p, out, pk = self.p, 0, 1
        for _ in range(self.n):
            out += ((a % p + b % p) % p) * pk
            a //= p
            b //= p
            pk *= p
        return out

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        p, out, pk = self.p, 0, 1
        for _ in range(self.n):
            out += (-(a % p) % p) * pk
            a //= p
            pk *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def scale(self, c: int, a: int) -> int:
        """Multiply by the prime-field integer c."""
        p, out, pk = self.p, 0, 1
        for _ in range(self.n):
            out += (c * (a % p) % p) * pk
            a //= p
            pk *= p
        return out

    def mul_poly(self, a: int, b: int) -> int:
        """Schoolbook multiply-and-reduce; the table-free reference product."""
        prod = _poly_mod(_poly_mul(self.to_coeffs(a), self.to_coeffs(b), self.p), self.poly, self.p)
        return sum(c * self.p**k for k, c in enumerate(prod))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.has_tables:
            exp, log = self._tables
            return int(exp[(int(log[a]) + int(log[b])) % (self.order - 1)])
        return self.mul_poly(a, b)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            raise ValueError("negative exponent")
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        if self.has_tables:
            exp, log = self._tables
            return int(exp[(-int(log[a])) % (self.order - 1)])
        return self.pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def mult_order(self, a: int) -> int:
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        m = self.order - 1
        for ell in factorize(m):
            while m % ell == 0 and self.pow(a, m // ell) == 1:
                m //= ell
        return m

    # -- structure --------------------------------------------------------

    @cached_property
    def generator(self) -> int:
        """Least element (canonical order) generating the unit group."""
        if self.order == 2:
            return 1
        m = self.order - 1
        ells = list(factorize(m))
        for g in range(2, self.order):
            if all(self._pow_poly(g, m // ell) != 1 for ell in ells):
                return g
        raise AssertionError("unit group is cyclic")

    def _pow_poly(self, a: int, e: int) -> int:
        res = _poly_powmod(self.to_coeffs(a), e, self.poly, self.p)
        return sum(c * self.p**k for k, c in enumerate(res))

    @property
    def has_tables(self) -> bool:
        return self.order <= TABLE_LIMIT

    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray]:
        q1 = self.order - 1
        g = self.generator
        exp = np.ones(1, dtype=np.int64)
        while len(exp) < q1:
            m = len(exp)
            step = self._pow_poly(g, m)
            take = min(m, q1 - m)
            exp = np.concatenate([exp, self._apply(self.mul_matrix(step), exp[:take])])
        log = np.full(self.order, -1, dtype=np.int64)
        log[exp] = np.arange(q1, dtype=np.int64)
        return exp, log

    def _require_tables(self):
        if not self.has_tables:
            raise ValueError(f"{self!r} exceeds the vectorized-arithmetic table limit {TABLE_LIMIT}")
        return self._tables

    # -- Z_p-linear maps --------------------------------------------------

    def digits(self, arr: np.ndarray) -> np.ndarray:
        arr = np.asarray(arr, dtype=np.int64)
        return np.stack([(arr // self.p**k) % self.p for k in range(self.n)], axis=-1)

    def from_digits(self, d: np.ndarray) -> np.ndarray:
        weights = np.array([self.p**k for k in range(self.n)], dtype=np.int64)
        return (d % self.p) @ weights

    def mul_matrix(self, c: int) -> np.ndarray:
        """Matrix over Z_p of x -> c*x acting on coefficient row vectors."""
        rows = [self.to_coeffs(self.mul_poly(c, self.p**k)) for k in range(self.n)]
        return np.array(rows, dtype=np.int64)

    def _apply(self, matrix: np.ndarray, arr: np.ndarray) -> np.ndarray:
        return self.from_digits(self.digits(arr) @ matrix)

    # -- vectorized arithmetic on int64 arrays ----------------------------

    def vadd(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        if self.n == 1:
            return (a + b) % self.p
        return self.from_digits(self.digits(a) + self.digits(b))

    def vneg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a
        return self.from_digits(-self.digits(a))

    def vsub(self, a, b) -> np.ndarray:
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b) -> np.ndarray:
        exp, log = self._require_tables()
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = exp[(log[a] + log[b]) % (self.order - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def vinv(self, a) -> np.ndarray:
        exp, log = self._require_tables()
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return exp[(-log[a]) % (self.order - 1)]

    def vpow(self, a, e: int) -> np.ndarray:
        exp, log = self._require_tables()
        a = np.asarray(a, dtype=np.int64)
        if e < 0:
            raise ValueError("negative exponent")
        if e == 0:
            return np.ones_like(a)
        er = e % (self.order - 1)
        out = exp[(log[a] * er) % (self.order - 1)]
        return np.where(a == 0, 0, out)

    def nth_power_mask(self, a, n: int) -> np.ndarray:
        if n <= 0:
            raise ValueError("n must be positive")
        a = np.asarray(a, dtype=np.int64)
        e = (self.order - 1) // math.gcd(n, self.order - 1)
        return (a == 0) | (self.vpow(a, e) == 1)


@lru_cache(maxsize=None)
def build_field(p: int, n: int) -> FieldCtx:
    """GF(p^n) defined by the least monic irreducible of degree n."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 1:
        raise ValueError("degree must be positive")
    if p**n >= SUPPORT_CEILING:
        raise ValueError(f"{p}^{n} exceeds the 63-bit support ceiling")
    return FieldCtx(p, n, least_irreducible(p, n))


def is_nth_power(field: FieldCtx | TowerCtx, x: int, n: int) -> bool:
    if n <= 0:
        raise ValueError("n must be positive")
    if isinstance(field, TowerCtx):
        field = field.top
    if x == 0:
        return True
    return field.pow(x, (field.order - 1) // math.gcd(n, field.order - 1)) == 1


def cube_roots_of_unity(field: FieldCtx) -> list[int]:
    """All x with x^3 = 1, sorted; the primitive ones are those other than 1."""
    m = field.order - 1
    if m % 3:
        return [1]
    for z in range(2, field.order):
        w = field.pow(z, m // 3)
        if w != 1:
            return sorted([1, w, field.mul(w, w)])
    raise AssertionError("3 | Q-1 forces a primitive cube root")


def gcd_helper(q: int) -> int:
    """gcd((q-1)^2, q^3 - 1)."""
    if q < 2:
        raise ValueError("q must be at least 2")
    return math.gcd(q * q - 2 * q + 1, q**3 - 1)


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TowerCtx:
    """GF(q) embedded in GF(q^i), with the relative Frobenius x -> x^q."""

    pp: PrimePower
    i: int
    base: FieldCtx
    top: FieldCtx
    embed_table: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.pp.q

    def __repr__(self):
        return f"TowerCtx(q={self.q}, i={self.i})"

    @cached_property
    def _embed_matrix(self) -> np.ndarray:
        return np.array([self.top.to_coeffs(e) for e in self.embed_table], dtype=np.int64)

    @cached_property
    def _frob_matrix(self) -> np.ndarray:
        top = self.top
        rows = [top.to_coeffs(top._pow_poly(top.p**k, self.q)) for k in range(top.n)]
        return np.array(rows, dtype=np.int64)

    def embed(self, a: int) -> int:
        out = 0
        for c, e in zip(self.base.to_coeffs(a), self.embed_table):
            if c:
                out = self.top.add(out, self.top.scale(c, e))
        return out

    def vembed(self, arr) -> np.ndarray:
        return self.top.from_digits(self.base.digits(arr) @ self._embed_matrix)

    def frobenius(self, x: int) -> int:
        d = np.array(self.top.to_coeffs(x), dtype=np.int64) @ self._frob_matrix
        return int(self.top.from_digits(d))

    def vfrobenius(self, arr) -> np.ndarray:
        return self.top._apply(self._frob_matrix, arr)

    @cached_property
    def subfield(self) -> np.ndarray:
        """Embedded GF(q), listed as embed(0), embed(1), ... in base order."""
        return self.vembed(np.arange(self.q, dtype=np.int64))

    @cached_property
    def subfield_units(self) -> np.ndarray:
        return self.subfield[1:]

    @cached_property
    def _restrict(self) -> dict[int, int]:
        return {int(y): a for a, y in enumerate(self.subfield)}

    def restrict(self, y: int) -> int:
        """Inverse of embed on the image of GF(q)."""
        try:
            return self._restrict[y]
        except KeyError:
            raise ValueError(f"{y} is not in the embedded base field") from None

    # -- GF(q)-coordinates on the top field w.r.t. the basis 1, X, ..., X^(i-1)

    @cached_property
    def _coord_matrices(self) -> tuple[np.ndarray, np.ndarray]:
        top, r = self.top, self.base.n
        xpow = [top.pow(top.p if top.n > 1 else 1, j) for j in range(self.i)]
        rows = [top.to_coeffs(top.mul_poly(self.embed_table[k], xpow[j])) for j in range(self.i) for k in range(r)]
        b = np.array(rows, dtype=np.int64)
        return b, _inv_matrix_mod(b, top.p)

    def coordinates(self, y: int) -> list[int]:
        _, binv = self._coord_matrices
        c = np.array(self.top.to_coeffs(y), dtype=np.int64) @ binv % self.top.p
        r = self.base.n
        return [self.base.from_coeffs([int(v) for v in c[j * r:(j + 1) * r]]) for j in range(self.i)]

    def from_coordinates(self, coords: Sequence[int]) -> int:
        b, _ = self._coord_matrices
        d = np.concatenate([self.base.digits(np.array([c]))[0] for c in coords]) @ b
        return int(self.top.from_digits(d))

    def vfrom_coordinates(self, coords: np.ndarray) -> np.ndarray:
        """Rows of i base-field coordinates -> top-field elements."""
        b, _ = self._coord_matrices
        d = np.concatenate([self.base.digits(coords[:, j]) for j in range(self.i)], axis=1)
        return self.top.from_digits(d @ b)


def _least_subfield_root(top: FieldCtx, poly: Sequence[int], q: int) -> int:
    """Least root of a degree-r polynomial over Z_p lying in the order-q subfield of top."""
    m = top.order - 1
    cof = m // (q - 1)
    ells = list(factorize(q - 1))
    for z in range(2, top.order):
        y = top.pow(z, cof)
        if all(top.pow(y, (q - 1) // ell) != 1 for ell in ells):
            break
    else:
        y = 1  # q = 2: the subfield unit group is trivial

    def value(x: int) -> int:
        acc = 0
        for c in reversed(poly):
            acc = top.add(top.mul(acc, x), c)
        return acc

    roots = []
    x = 1
    for _ in range(q - 1):
        if value(x) == 0:
            roots.append(x)
        x = top.mul(x, y)
    if value(0) == 0:
        roots.append(0)
    return min(roots)


@lru_cache(maxsize=None)
def build_tower(q: int, i: int) -> TowerCtx:
    pp = PrimePower.from_int(q) if isinstance(q, int) else q
    if not 1 <= i <= 4:
        raise ValueError("extension degree must be in 1..4")
    if pp.p ** (pp.r * i) >= SUPPORT_CEILING:
        raise ValueError(f"q^{i} exceeds the 63-bit support ceiling")
    base = build_field(pp.p, pp.r)
    top = build_field(pp.p, pp.r * i)
    if i == 1 or pp.r == 1:
        table = (1,) if pp.r == 1 else tuple(pp.p**k for k in range(pp.r))
    else:
        g = _least_subfield_root(top, base.poly, pp.q)
        table = tuple(top.pow(g, k) for k in range(pp.r))
    return TowerCtx(pp, i, base, top, table)


def t_map(t: TowerCtx, x: int) -> int:
    if t.i != 3:
        raise ValueError("T is defined on GF(q^3)")
    fx = t.frobenius(x)
    return t.top.add(t.top.add(t.frobenius(fx), fx), x)


def vt_map(t: TowerCtx, arr) -> np.ndarray:
    if t.i != 3:
        raise ValueError("T is defined on GF(q^3)")
    f1 = t.vfrobenius(arr)
    return t.top.vadd(t.top.vadd(t.vfrobenius(f1), f1), arr)


def nullspace(field: FieldCtx, rows: list[list[int]]) -> list[list[int]]:
    """Basis of {x : A x = 0} over ``field`` by Gauss-Jordan elimination."""
    a = [list(r) for r in rows]
    nrows, ncols = len(a), len(a[0])
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if a[r][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = field.inv(a[rank][col])
        a[rank] = [field.mul(inv, v) for v in a[rank]]
        for r in range(nrows):
            if r != rank and a[r][col]:
                f = a[r][col]
                a[r] = [field.sub(v, field.mul(f, w)) for v, w in zip(a[r], a[rank])]
        pivots.append(col)
        rank += 1
        if rank == nrows:
            break
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        vec = [0] * ncols
        vec[free] = 1
        for row, pc in enumerate(pivots):
            vec[pc] = field.neg(a[row][free])
        basis.append(vec)
    return basis


def t_kernel(t: TowerCtx) -> np.ndarray:
    """Sorted array of all roots of T in GF(q^3), via the GF(q)-matrix of T."""
    if t.i != 3:
        raise ValueError("T is defined on GF(q^3)")
    cols = [t.coordinates(t_map(t, t.from_coordinates([1 if j == m else 0 for j in range(3)]))) for m in range(3)]
    matrix = [[cols[m][j] for m in range(3)] for j in range(3)]
    basis = nullspace(t.base, matrix)
    q = t.q
    combos = np.zeros((1, 3), dtype=np.int64)
    for vec in basis:
        scalars = np.arange(q, dtype=np.int64)
        scaled = np.stack([t.base.vmul(scalars, c) if c else np.zeros(q, dtype=np.int64) for c in vec], axis=1)
        combos = t.base.vadd(combos[:, None, :], scaled[None, :, :]).reshape(-1, 3)
    return np.sort(t.vfrom_coordinates(combos))
