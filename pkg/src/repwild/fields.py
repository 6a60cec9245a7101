"""Exact dense linear algebra over prime fields F_p.

Matrices are stored row-major as numpy int64 arrays with entries reduced
into [0, p).  Everything here is deterministic and pure; FpMatrix values
are frozen after construction.
"""
from __future__ import annotations

from typing import Optional

import numpy as np

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """The field F_p.  Primality of p is checked at construction."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        p = int(p)
        if p < 2 or p > 2**31 - 1 or not is_prime(p):
            raise ValueError(f"modulus {p} is not a prime in [2, 2^31-1]")
        self.p = p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(a, self.p - 2, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"F_{self.p}"


# int64 matmul is exact as long as the dot-product sums stay below 2^63.
_FAST_P_LIMIT = 2**26


def _asarray(field: PrimeField, data) -> np.ndarray:
    a = np.array(data, dtype=np.int64)
    if a.ndim != 2:
        raise ValueError("matrix data must be two-dimensional")
    return np.mod(a, field.p)


class FpMatrix:
    """Immutable dense matrix over a prime field."""

    __slots__ = ("field", "a")

    def __init__(self, field: PrimeField, data):
        self.field = field
        a = _asarray(field, data)
        a.setflags(write=False)
        self.a = a

    @classmethod
    def zeros(cls, field: PrimeField, rows: int, cols: int) -> "FpMatrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: PrimeField, n: int) -> "FpMatrix":
        return cls(field, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self):
        return self.a.shape

    def is_zero(self) -> bool:
        return not self.a.any()

    def transpose(self) -> "FpMatrix":
        return FpMatrix(self.field, self.a.T)

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        self._compat(other)
        return FpMatrix(self.field, self.a + other.a)

    def __sub__(self, other: "FpMatrix") -> "FpMatrix":
        self._compat(other)
        return FpMatrix(self.field, self.a - other.a)

    def __neg__(self) -> "FpMatrix":
        return FpMatrix(self.field, -self.a)

    def scale(self, c: int) -> "FpMatrix":
        return FpMatrix(self.field, self.a * (c % self.field.p))

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        if self.field != other.field:
            raise ValueError("field mismatch")
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        p = self.field.p
        if p <= _FAST_P_LIMIT:
            prod = (self.a @ other.a) % p
        else:
            prod = (self.a.astype(object) @ other.a.astype(object)) % p
            prod = prod.astype(np.int64)
        return FpMatrix(self.field, prod)

    def power(self, k: int) -> "FpMatrix":
        if self.rows != self.cols:
            raise ValueError("power of non-square matrix")
        out = FpMatrix.identity(self.field, self.rows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base if k > 1 else base
            k >>= 1
        return out

    def __eq__(self, other):
        return (
            isinstance(other, FpMatrix)
            and self.field == other.field
            and self.shape == other.shape
            and bool(np.array_equal(self.a, other.a))
        )

    def __hash__(self):
        return hash((self.field.p, self.shape, self.a.tobytes()))

    def _compat(self, other: "FpMatrix"):
        if self.field != other.field or self.shape != other.shape:
            raise ValueError("incompatible matrices")

    def __repr__(self):
        return f"FpMatrix(p={self.field.p}, {self.a.tolist()})"


def hstack(mats) -> FpMatrix:
    mats = list(mats)
    return FpMatrix(mats[0].field, np.hstack([m.a for m in mats]))


def vstack(mats) -> FpMatrix:
    mats = list(mats)
    return FpMatrix(mats[0].field, np.vstack([m.a for m in mats]))


def block_diag(mats) -> FpMatrix:
    mats = list(mats)
    field = mats[0].field
    r = sum(m.rows for m in mats)
    c = sum(m.cols for m in mats)
    out = np.zeros((r, c), dtype=np.int64)
    i = j = 0
    for m in mats:
        out[i : i + m.rows, j : j + m.cols] = m.a
        i += m.rows
        j += m.cols
    return FpMatrix(field, out)


def kron(a: FpMatrix, b: FpMatrix) -> FpMatrix:
    return FpMatrix(a.field, np.kron(a.a, b.a) % a.field.p)


def _rref_array(a: np.ndarray, p: int):
    """In-place style reduced row echelon form; returns (array, pivots).

    For small p the elimination runs on int16 (products stay below 2^15),
    which is substantially faster on large systems.
    """
    small = p <= 127
    m = a.astype(np.int16) if small else a.copy()
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        m[r] = (m[r] * inv) % p
        col = m[:, c].copy()
        col[r] = 0
        mask = np.nonzero(col)[0]
        if mask.size:
            m[mask] = (m[mask] - np.outer(col[mask], m[r])) % p
        pivots.append(c)
        r += 1
    return (m.astype(np.int64) if small else m), pivots


def rref(m: FpMatrix):
    """Reduced row echelon form.

    Returns (rref matrix, pivot column list, rank).
    """
    red, pivots = _rref_array(m.a, m.field.p)
    return FpMatrix(m.field, red), pivots, len(pivots)


def rank(m: FpMatrix) -> int:
    return rref(m)[2]


def kernel_basis(m: FpMatrix) -> FpMatrix:
    """Columns form a basis of the null space {x : m x = 0}."""
    p = m.field.p
    red, pivots = _rref_array(m.a, p)
    free = [c for c in range(m.cols) if c not in pivots]
    out = np.zeros((m.cols, len(free)), dtype=np.int64)
    for k, c in enumerate(free):
        out[c, k] = 1
        for r, pc in enumerate(pivots):
            out[pc, k] = (-red[r, c]) % p
    return FpMatrix(m.field, out)


def solve(a: FpMatrix, b: FpMatrix) -> Optional[FpMatrix]:
    """One solution x of a @ x = b, or None if the system is inconsistent."""
    if a.field != b.field:
        raise ValueError("field mismatch")
    if a.rows != b.rows:
        raise ValueError(f"row mismatch {a.rows} != {b.rows}")
    p = a.field.p
    aug = np.hstack([a.a, b.a])
    red, pivots = _rref_array(aug, p)
    for c in pivots:
        if c >= a.cols:
            return None
    x = np.zeros((a.cols, b.cols), dtype=np.int64)
    for r, c in enumerate(pivots):
        x[c] = red[r, a.cols :]
    return FpMatrix(a.field, x)


def column_space_basis(m: FpMatrix) -> FpMatrix:
    """Columns form a basis of the column space (original columns kept)."""
    _, pivots, _ = rref(m)
    return FpMatrix(m.field, m.a[:, pivots])


def in_column_space(m: FpMatrix, v: FpMatrix) -> bool:
    return solve(m, v) is not None


def is_nilpotent(m: FpMatrix) -> bool:
    if m.rows != m.cols:
        raise ValueError("nilpotency of non-square matrix")
    if m.rows == 0:
        return True
    return m.power(m.rows).is_zero()


def fitting_power(m: FpMatrix):
    """Smallest k with rank(m^k) = rank(m^(k+1)), plus bases of ker m^k and im m^k.

    The two bases span complementary subspaces (Fitting's lemma).
    """
    if m.rows != m.cols:
        raise ValueError("fitting_power of non-square matrix")
    n = m.rows
    power = FpMatrix.identity(m.field, n)
    prev_rank = n
    k = 0
    while True:
        nxt = power @ m
        r = rank(nxt)
        if r == prev_rank:
            break
        power = nxt
        prev_rank = r
        k += 1
    ker = kernel_basis(power)
    im = column_space_basis(power)
    return k, ker, im


# ---------------------------------------------------------------------------
# Polynomials over F_p: coefficient lists, lowest degree first.
# ---------------------------------------------------------------------------


def poly_trim(f):
    f = [int(c) for c in f]
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_add(f, g, p):
    n = max(len(f), len(g))
    return poly_trim([((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)) % p for i in range(n)])


def poly_sub(f, g, p):
    n = max(len(f), len(g))
    return poly_trim([((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % p for i in range(n)])


def poly_mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] = (out[i + j] + a * b) % p
    return poly_trim(out)


def poly_divmod(f, g, p):
    f = poly_trim(f)
    g = poly_trim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    q = [0] * max(0, len(f) - len(g) + 1)
    r = list(f)
    ginv = pow(g[-1], p - 2, p)
    while len(r) >= len(g):
        c = (r[-1] * ginv) % p
        d = len(r) - len(g)
        q[d] = c
        for i, b in enumerate(g):
            r[d + i] = (r[d + i] - c * b) % p
        r = poly_trim(r)
        if not r:
            break
    return poly_trim(q), poly_trim(r)


def poly_mod(f, g, p):
    return poly_divmod(f, g, p)[1]


def poly_monic(f, p):
    f = poly_trim(f)
    if not f:
        return f
    inv = pow(int(f[-1]), p - 2, p)
    return [(c * inv) % p for c in f]


def poly_gcd(f, g, p):
    f, g = poly_trim(f), poly_trim(g)
    while g:
        f, g = g, poly_mod(f, g, p)
    return poly_monic(f, p)


def poly_pow(f, e, p):
    out = [1]
    base = list(f)
    while e:
        if e & 1:
            out = poly_mul(out, base, p)
        base = poly_mul(base, base, p)
        e >>= 1
    return out


def poly_powmod(f, e, mod, p):
    out = [1]
    base = poly_mod(f, mod, p)
    while e:
        if e & 1:
            out = poly_mod(poly_mul(out, base, p), mod, p)
        base = poly_mod(poly_mul(base, base, p), mod, p)
        e >>= 1
    return out


def poly_is_irreducible(f, p) -> bool:
    """Rabin irreducibility test for a monic polynomial over F_p."""
    f = poly_monic(f, p)
    d = len(f) - 1
    if d <= 0:
        return False
    if d == 1:
        return True
    x = [0, 1]
    # x^(p^d) == x mod f
    frob = poly_powmod(x, p**d, f, p)
    if poly_trim(poly_sub(frob, x, p)):
        return False
    for q in {q for q in range(2, d + 1) if d % q == 0 and is_prime(q)}:
        g = poly_powmod(x, p ** (d // q), f, p)
        if len(poly_gcd(poly_sub(g, x, p), f, p)) - 1 != 0:
            return False
    return True


def companion_matrix(f, field: PrimeField) -> FpMatrix:
    """Companion matrix of a monic polynomial (lowest-first coefficients)."""
    f = poly_monic(f, field.p)
    n = len(f) - 1
    if n == 0:
        return FpMatrix.zeros(field, 0, 0)
    a = np.zeros((n, n), dtype=np.int64)
    for i in range(1, n):
        a[i, i - 1] = 1
    for i in range(n):
        a[i, n - 1] = (-f[i]) % field.p
    return FpMatrix(field, a)


def charpoly(m: FpMatrix):
    """Characteristic polynomial det(tI - m), lowest-first coefficients.

    Hessenberg reduction followed by the leading-minor recurrence; O(n^3).
    """
    if m.rows != m.cols:
        raise ValueError("charpoly of non-square matrix")
    n = m.rows
    p = m.field.p
    if n == 0:
        return [1]
    h = m.a.copy()
    # reduce to upper Hessenberg by similarity
    for c in range(n - 2):
        nz = np.nonzero(h[c + 1 :, c])[0]
        if nz.size == 0:
            continue
        piv = c + 1 + int(nz[0])
        if piv != c + 1:
            h[[c + 1, piv]] = h[[piv, c + 1]]
            h[:, [c + 1, piv]] = h[:, [piv, c + 1]]
        inv = pow(int(h[c + 1, c]), p - 2, p)
        for r in range(c + 2, n):
            if h[r, c]:
                f = (h[r, c] * inv) % p
                h[r] = (h[r] - f * h[c + 1]) % p
                h[:, c + 1] = (h[:, c + 1] + f * h[:, r]) % p
    # charpolys of leading principal Hessenberg minors
    polys = [[1]]
    for k in range(1, n + 1):
        term = poly_mul(polys[k - 1], [(-h[k - 1, k - 1]) % p, 1], p)
        beta = 1
        for i in range(k - 1, 0, -1):
            beta = (beta * h[i, i - 1]) % p
            if beta == 0:
                break
            coef = (h[i - 1, k - 1] * beta) % p
            if coef:
                term = poly_sub(term, [(c * coef) % p for c in polys[i - 1]], p)
        polys.append(term)
    out = [int(c) for c in polys[n]]
    return out + [0] * (n + 1 - len(out))


def charpoly_berkowitz(m: FpMatrix):
    """Division-free reference implementation (slow); used to cross-check."""
    n = m.rows
    p = m.field.p
    if n == 0:
        return [1]
    a = m.a % p
    # Samuelson-Berkowitz: iteratively build the char poly vector.
    vec = np.array([1, (-a[0, 0]) % p], dtype=object)
    for i in range(1, n):
        r = a[i, :i]
        c = a[:i, i]
        blk = a[:i, :i]
        toep = np.zeros((i + 2, i + 1), dtype=object)
        series = [np.int64(1), (-a[i, i]) % p]
        power = c.copy()
        series.append((-(r @ power)) % p)
        for _ in range(i - 1):
            power = (blk @ power) % p
            series.append((-(r @ power)) % p)
        for col in range(i + 1):
            for row in range(col, min(col + len(series), i + 2)):
                toep[row, col] = series[row - col]
        vec = (toep @ vec) % p
    coeffs = [int(x) % p for x in vec]  # highest degree first
    return list(reversed(coeffs))


def minpoly(m: FpMatrix):
    """Minimal polynomial of a square matrix, lowest-first, monic."""
    n = m.rows
    p = m.field.p
    if n == 0:
        return [1]
    result = [1]
    rng = np.random.default_rng(12345)
    tried = 0
    while True:
        if tried == 0:
            v = np.zeros(n, dtype=np.int64)
            v[0] = 1
        else:
            v = rng.integers(0, p, size=n).astype(np.int64)
        tried += 1
        # annihilator of the Krylov sequence of v
        kry = [v]
        for _ in range(n):
            kry.append((m.a @ kry[-1]) % p)
        mat = FpMatrix(m.field, np.array(kry, dtype=np.int64).T)
        red, pivots = _rref_array(mat.a, p)
        dep = next(c for c in range(n + 1) if c not in pivots)
        g = [0] * (dep + 1)
        g[dep] = 1
        for r, c in enumerate(pivots):
            if c < dep:
                g[c] = (-red[r, dep]) % p
        num = poly_divmod(poly_mul(result, g, p), poly_gcd(result, g, p), p)[0]
        result = poly_monic(num, p)
        # certify: result(m) == 0
        acc = FpMatrix.zeros(m.field, n, n)
        powm = FpMatrix.identity(m.field, n)
        for c in result:
            if c:
                acc = acc + powm.scale(c)
            powm = powm @ m
        if acc.is_zero():
            return result
        if tried > n + 5:
            raise RuntimeError("minpoly failed to stabilize")
