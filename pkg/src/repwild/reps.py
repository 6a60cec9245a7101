"""Finite-dimensional representations of bound quivers over F_p.

Hom spaces come from solving the naturality (intertwiner) equations.
Krull-Schmidt decomposition hunts for Fitting splits of endomorphisms and,
when no split is found, certifies locality of the endomorphism algebra by
computing its Jacobson radical (charpoly-coefficient chain in prime
characteristic, with an independent post-verification that the candidate
is a nilpotent ideal with field quotient).  Answers are never guessed: if
the certification budget runs out, UndecidedError is raised.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .fields import (
    FpMatrix,
    PrimeField,
    charpoly,
    fitting_power,
    is_nilpotent,
    kernel_basis,
    poly_gcd,
    poly_is_irreducible,
    poly_monic,
    poly_trim,
    rank,
    rref,
    solve,
    _rref_array,
)
from .quiver import BoundQuiver, BoundQuiverAlgebra, PathWord

DEFAULT_SEED = 0xC0FFEE


class UndecidedError(RuntimeError):
    """The decomposition machinery exhausted its budget without a certificate."""


class Representation:
    """One F_p matrix per arrow and one dimension per vertex."""

    def __init__(self, algebra: BoundQuiver, dims: Sequence[int], maps: Dict[str, FpMatrix]):
        self.algebra = algebra
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != algebra.vertex_count:
            raise ValueError("dimension vector length mismatch")
        if any(d < 0 for d in self.dims):
            raise ValueError("negative dimension")
        field = algebra.field
        full = {}
        for a in algebra.quiver.arrows:
            m = maps.get(a.name)
            if m is None:
                m = FpMatrix.zeros(field, self.dims[a.tgt], self.dims[a.src])
            if m.shape != (self.dims[a.tgt], self.dims[a.src]):
                raise ValueError(
                    f"map for {a.name} has shape {m.shape}, expected "
                    f"({self.dims[a.tgt]}, {self.dims[a.src]})"
                )
            full[a.name] = m
        self.maps = full

    @property
    def field(self) -> PrimeField:
        return self.algebra.field

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def path_matrix(self, path: PathWord) -> FpMatrix:
        m = FpMatrix.identity(self.field, self.dims[path.source])
        for ai in path.arrows:
            a = self.algebra.quiver.arrows[ai]
            m = self.maps[a.name] @ m
        return m

    def relation_defect(self):
        """First nonzero relation evaluation, or None if all vanish."""
        for rel in self.algebra.relations:
            acc = FpMatrix.zeros(self.field, self.dims[rel.target], self.dims[rel.source])
            for c, q in rel:
                acc = acc + self.path_matrix(q).scale(c)
            if not acc.is_zero():
                return rel, acc
        return None

    def validate(self) -> bool:
        return self.relation_defect() is None

    def element_matrix(self, vec: np.ndarray) -> Dict[Tuple[int, int], FpMatrix]:
        """Action of an algebra element (needs a built path basis)."""
        alg = self.algebra
        if not isinstance(alg, BoundQuiverAlgebra):
            raise TypeError("element action needs a BoundQuiverAlgebra")
        out = {}
        for (src, tgt), idxs in alg.blocks.items():
            acc = FpMatrix.zeros(self.field, self.dims[tgt], self.dims[src])
            for i in idxs:
                c = int(vec[i])
                if c:
                    acc = acc + self.path_matrix(alg.basis[i]).scale(c)
            out[(src, tgt)] = acc
        return out

    def canonical_key(self) -> bytes:
        parts = [np.array(self.dims, dtype=np.int64).tobytes()]
        for a in self.algebra.quiver.arrows:
            parts.append(self.maps[a.name].a.tobytes())
        return b"|".join(parts)

    def __repr__(self):
        return f"Representation(dims={self.dims})"


def zero_representation(algebra: BoundQuiver) -> Representation:
    return Representation(algebra, [0] * algebra.vertex_count, {})


def direct_sum(reps: Sequence[Representation]) -> Representation:
    if not reps:
        raise ValueError("empty direct sum; use zero_representation")
    alg = reps[0].algebra
    field = reps[0].field
    dims = [sum(r.dims[v] for r in reps) for v in range(alg.vertex_count)]
    maps = {}
    for a in alg.quiver.arrows:
        blocks = np.zeros((dims[a.tgt], dims[a.src]), dtype=np.int64)
        ro = co = 0
        for r in reps:
            m = r.maps[a.name]
            blocks[ro : ro + m.rows, co : co + m.cols] = m.a
            ro += r.dims[a.tgt]
            co += r.dims[a.src]
        maps[a.name] = FpMatrix(field, blocks)
    return Representation(alg, dims, maps)


def projective(alg: BoundQuiverAlgebra, vertex: int) -> Representation:
    """Indecomposable projective P_i = (paths starting at i), acting on the left."""
    if not (0 <= vertex < alg.vertex_count):
        raise ValueError("vertex out of range")
    dims = [len(alg.blocks.get((vertex, j), [])) for j in range(alg.vertex_count)]
    pos = {}
    for j in range(alg.vertex_count):
        for k, g in enumerate(alg.blocks.get((vertex, j), [])):
            pos[g] = (j, k)
    R = alg.left_mult_matrices()
    maps = {}
    for ai, a in enumerate(alg.quiver.arrows):
        m = np.zeros((dims[a.tgt], dims[a.src]), dtype=np.int64)
        for k, g in enumerate(alg.blocks.get((vertex, a.src), [])):
            col = R[ai][:, g]
            for gg in np.nonzero(col)[0]:
                j2, k2 = pos[int(gg)]
                if j2 != a.tgt:
                    raise AssertionError("left multiplication left the expected block")
                m[k2, k] = col[gg]
        maps[a.name] = FpMatrix(alg.field, m)
    return Representation(alg, dims, maps)


def simple(alg: BoundQuiver, vertex: int) -> Representation:
    dims = [0] * alg.vertex_count
    dims[vertex] = 1
    return Representation(alg, dims, {})


# ---------------------------------------------------------------------------
# Hom spaces
# ---------------------------------------------------------------------------


@dataclass
class HomSpace:
    domain: Representation
    codomain: Representation
    basis: List[Tuple[FpMatrix, ...]]

    @property
    def dim(self) -> int:
        return len(self.basis)


def _hom_kernel(M: Representation, N: Representation) -> np.ndarray:
    """Columns = solutions (phi_i) of the intertwiner equations, vectorized."""
    if M.algebra is not N.algebra and M.algebra.quiver != N.algebra.quiver:
        raise ValueError("representations over different quivers")
    p = M.field.p
    nv = M.algebra.vertex_count
    sizes = [N.dims[v] * M.dims[v] for v in range(nv)]
    offs = np.concatenate([[0], np.cumsum(sizes)])
    total = int(offs[-1])
    rows = []
    for a in M.algebra.quiver.arrows:
        X = M.maps[a.name].a
        Y = N.maps[a.name].a
        nr = N.dims[a.tgt] * M.dims[a.src]
        if nr == 0:
            continue
        block = np.zeros((nr, total), dtype=np.int64)
        if sizes[a.tgt]:
            block[:, offs[a.tgt] : offs[a.tgt + 1]] = np.kron(
                np.eye(N.dims[a.tgt], dtype=np.int64), X.T
            )
        if sizes[a.src]:
            block[:, offs[a.src] : offs[a.src + 1]] -= np.kron(
                Y, np.eye(M.dims[a.src], dtype=np.int64)
            )
        rows.append(block % p)
    if rows:
        mat = np.vstack(rows) % p
    else:
        mat = np.zeros((0, total), dtype=np.int64)
    ker = kernel_basis(FpMatrix(M.field, mat))
    return ker.a, offs


def hom_basis(M: Representation, N: Representation) -> HomSpace:
    """Basis of Hom(M, N): tuples (phi_v) with phi_t X_a = Y_a phi_s."""
    ker, offs = _hom_kernel(M, N)
    field = M.field
    basis = []
    for k in range(ker.shape[1]):
        mats = []
        for v in range(M.algebra.vertex_count):
            seg = ker[offs[v] : offs[v + 1], k]
            mats.append(FpMatrix(field, seg.reshape(N.dims[v], M.dims[v])))
        basis.append(tuple(mats))
    return HomSpace(M, N, basis)


def hom_dim(M: Representation, N: Representation) -> int:
    ker, _ = _hom_kernel(M, N)
    return ker.shape[1]


def hom_to_total_matrix(hom: Tuple[FpMatrix, ...], M: Representation, N: Representation) -> FpMatrix:
    """Block-diagonal matrix of a hom element on the total spaces."""
    field = M.field
    D_M, D_N = M.total_dim, N.total_dim
    out = np.zeros((D_N, D_M), dtype=np.int64)
    ro = co = 0
    for v in range(M.algebra.vertex_count):
        h = hom[v]
        out[ro : ro + h.rows, co : co + h.cols] = h.a
        ro += N.dims[v]
        co += M.dims[v]
    return FpMatrix(field, out)


def compose_homs(g: Tuple[FpMatrix, ...], f: Tuple[FpMatrix, ...]) -> Tuple[FpMatrix, ...]:
    """g after f, vertexwise."""
    return tuple(gv @ fv for gv, fv in zip(g, f))


# ---------------------------------------------------------------------------
# Radical of a unital matrix algebra over F_p
# ---------------------------------------------------------------------------


def _span_reduce(vecs: np.ndarray, p: int) -> np.ndarray:
    """Rows spanning the same space, reduced; drops zero rows."""
    if vecs.size == 0:
        return vecs.reshape(0, vecs.shape[1] if vecs.ndim == 2 else 0)
    red, pivots = _rref_array(vecs % p, p)
    return red[: len(pivots)]


def _in_span(rows: np.ndarray, vec: np.ndarray, p: int) -> bool:
    if rows.shape[0] == 0:
        return not (vec % p).any()
    aug = np.vstack([rows, vec]) % p
    return len(_rref_array(aug, p)[1]) == rows.shape[0]


def _scalar_shift_radical(basis: List[FpMatrix]) -> Optional[List[FpMatrix]]:
    """Fast radical candidate for the common case End/rad = F_p.

    If every basis element b has a scalar shift b - lambda(b) that is
    nilpotent, the span of those shifts is a codimension-one candidate;
    when it verifies as a nilpotent ideal it must be the radical.
    """
    field = basis[0].field
    p = field.p
    if p > 64:
        return None
    n = basis[0].rows
    eye = FpMatrix.identity(field, n)
    shifts = []
    for b in basis:
        found = None
        for lam in range(p):
            cand = b - eye.scale(lam)
            if is_nilpotent(cand):
                found = cand
                break
        if found is None:
            return None
        if not found.is_zero():
            shifts.append(found)
    rows = _span_reduce(
        np.array([m.a.ravel() for m in shifts])
        if shifts
        else np.zeros((0, n * n), dtype=np.int64),
        p,
    )
    if rows.shape[0] != len(basis) - 1:
        return None
    cand = [FpMatrix(field, r.reshape(n, n)) for r in rows]
    return cand if _verify_nil_ideal(basis, cand) else None


def matrix_algebra_radical(basis: List[FpMatrix]) -> Optional[List[FpMatrix]]:
    """Jacobson radical of the span of `basis` (a unital matrix algebra).

    Chain of charpoly-coefficient conditions in characteristic p, followed
    by an independent verification that the candidate is a nilpotent ideal.
    Returns a basis of the radical, or None if verification fails.
    """
    if not basis:
        return []
    field = basis[0].field
    p = field.p
    n = basis[0].rows
    fast = _scalar_shift_radical(basis)
    if fast is not None:
        return fast
    cur = [m.a for m in basis]
    j = 0
    while p**j <= n and cur:
        d = len(cur)
        coeff_index = n - p**j
        rows = []
        for b in cur:
            row = []
            for a in cur:
                cp = charpoly(FpMatrix(field, (a @ b) % p))
                row.append(cp[coeff_index] % p)
            rows.append(row)
        mat = FpMatrix(field, np.array(rows, dtype=np.int64))
        ker = kernel_basis(mat)
        nxt = []
        for k in range(ker.cols):
            acc = np.zeros((n, n), dtype=np.int64)
            for i in range(d):
                c = int(ker.a[i, k])
                if c:
                    acc = (acc + c * cur[i]) % p
            if acc.any():
                nxt.append(acc)
        cur = nxt
        j += 1
    cand = [FpMatrix(field, m) for m in cur]
    return cand if _verify_nil_ideal(basis, cand) else None


def _verify_nil_ideal(basis: List[FpMatrix], cand: List[FpMatrix]) -> bool:
    """Certify: span(cand) is a two-sided nilpotent ideal of span(basis)."""
    if not cand:
        return True
    field = basis[0].field
    p = field.p
    n = basis[0].rows
    rows = _span_reduce(np.array([m.a.ravel() for m in cand]), p)
    prods = []
    for r in cand:
        for b in basis:
            prods.append((r @ b).a.ravel())
            prods.append((b @ r).a.ravel())
    stacked = np.vstack([rows, np.array(prods, dtype=np.int64)]) % p
    if len(_rref_array(stacked, p)[1]) != rows.shape[0]:
        return False
    layer = rows
    for _ in range(n + 1):
        if layer.shape[0] == 0:
            return True
        prods = []
        for x in layer:
            xm = x.reshape(n, n)
            for r in cand:
                prods.append(((xm @ r.a) % p).ravel())
        layer = _span_reduce(np.array(prods, dtype=np.int64), p) if prods else rows[:0]
    return layer.shape[0] == 0


class _QuotientAlgebra:
    """E / R for a matrix algebra E with nilpotent ideal R, by coordinates."""

    def __init__(self, basis: List[FpMatrix], rad: List[FpMatrix]):
        self.field = basis[0].field
        p = self.field.p
        n = basis[0].rows
        self._n = n
        rad_rows = _span_reduce(np.array([m.a.ravel() for m in rad]) if rad else np.zeros((0, n * n), dtype=np.int64), p)
        # complement basis: algebra elements independent modulo rad
        complement = []
        cur = rad_rows
        for b in basis:
            v = b.a.ravel() % p
            if not _in_span(cur, v, p):
                complement.append(b)
                cur = _span_reduce(np.vstack([cur, v]) if cur.size else v.reshape(1, -1), p)
        self.rad_rows = rad_rows
        self.reps = complement  # matrix representatives of the quotient basis
        self.dim = len(complement)
        self._coord_mat = np.vstack(
            [rad_rows, np.array([m.a.ravel() for m in complement])]
        ) % p if self.dim else rad_rows

    def coords(self, m: FpMatrix) -> np.ndarray:
        """Quotient coordinates of an algebra element."""
        sol = solve(
            FpMatrix(self.field, self._coord_mat.T),
            FpMatrix(self.field, m.a.ravel().reshape(-1, 1)),
        )
        if sol is None:
            raise AssertionError("element not in the algebra span")
        return sol.a[self.rad_rows.shape[0] :, 0]

    def element(self, coords: np.ndarray) -> FpMatrix:
        p = self.field.p
        acc = np.zeros((self._n, self._n), dtype=np.int64)
        for i, c in enumerate(coords):
            if c % p:
                acc = (acc + int(c) * self.reps[i].a) % p
        return FpMatrix(self.field, acc)

    def minpoly_of(self, coords: np.ndarray):
        """Minimal polynomial of the class of an element inside E/R."""
        p = self.field.p
        one = self.coords(FpMatrix.identity(self.field, self._n))
        powers = [one]
        m = self.element(coords)
        cur = FpMatrix.identity(self.field, self._n)
        for _ in range(self.dim):
            cur = cur @ m
            powers.append(self.coords(cur))
        mat = np.array(powers, dtype=np.int64).T
        red, pivots = _rref_array(mat % p, p)
        dep = next(c for c in range(mat.shape[1]) if c not in pivots)
        g = [0] * (dep + 1)
        g[dep] = 1
        for r, c in enumerate(pivots):
            if c < dep:
                g[c] = (-red[r, dep]) % p
        return poly_monic(poly_trim(g), p)


# ---------------------------------------------------------------------------
# Decomposition
# ---------------------------------------------------------------------------


@dataclass
class EndAlgebraProfile:
    dimension: int
    radical_dimension: Optional[int]
    is_local: bool
    idempotent: Optional[Tuple[FpMatrix, ...]]


@dataclass
class Decomposition:
    """Multiset of indecomposable pieces plus an explicit base-change witness.

    witness[v] maps the direct sum of the pieces (in listed order, with
    multiplicity) isomorphically onto M at vertex v.
    """

    pieces: List[Tuple[Representation, int]]
    witness: Optional[List[FpMatrix]]

    def summand_list(self) -> List[Representation]:
        out = []
        for rep, mult in self.pieces:
            out.extend([rep] * mult)
        return out


def _restrict_to_subspace(M: Representation, cols: List[FpMatrix]) -> Representation:
    """Subrepresentation spanned by the given per-vertex column bases."""
    maps = {}
    for a in M.algebra.quiver.arrows:
        img = M.maps[a.name] @ cols[a.src]
        coords = solve(cols[a.tgt], img)
        if coords is None:
            raise AssertionError("subspace not invariant")
        maps[a.name] = coords
    dims = [c.cols for c in cols]
    return Representation(M.algebra, dims, maps)


def _split_by_endo(M: Representation, f_total: FpMatrix):
    """Try to split M along the Fitting decomposition of an endomorphism."""
    k, ker, im = fitting_power(f_total)
    if ker.cols == 0 or im.cols == 0:
        return None
    offs = np.concatenate([[0], np.cumsum(M.dims)])
    field = M.field

    def per_vertex(cols: FpMatrix) -> List[FpMatrix]:
        out = []
        for v in range(M.algebra.vertex_count):
            seg = cols.a[offs[v] : offs[v + 1], :]
            red, pivots = _rref_array(seg.T % field.p, field.p)
            out.append(FpMatrix(field, red[: len(pivots)].T))
        return out

    ker_cols = per_vertex(ker)
    im_cols = per_vertex(im)
    for v in range(M.algebra.vertex_count):
        if ker_cols[v].cols + im_cols[v].cols != M.dims[v]:
            raise AssertionError("Fitting split is not vertexwise complementary")
    return ker_cols, im_cols


class _Decomposer:
    def __init__(self, seed: int = DEFAULT_SEED):
        self.rng = np.random.default_rng(seed)

    def decompose(self, M: Representation) -> Decomposition:
        if M.total_dim == 0:
            return Decomposition([], None)
        eye = [FpMatrix.identity(M.field, d) for d in M.dims]
        leaves: List[Tuple[Representation, List[FpMatrix]]] = []
        self._walk(M, eye, leaves)
        # group leaves into iso classes
        classes: List[List[int]] = []
        reps = [leaf[0] for leaf in leaves]
        for i in range(len(leaves)):
            for cls in classes:
                if _indec_iso(reps[cls[0]], reps[i]):
                    cls.append(i)
                    break
            else:
                classes.append([i])
        def class_key(cls):
            r = reps[cls[0]]
            return (r.total_dim, r.dims, r.canonical_key())
        keyed = []
        for cls in classes:
            best = min(cls, key=lambda i: reps[i].canonical_key())
            keyed.append((class_key(cls), best, cls))
        keyed.sort(key=lambda t: t[0])
        pieces = [(reps[best], len(cls)) for _, best, cls in keyed]
        # assemble the witness in the sorted order; each leaf keeps its own maps,
        # so replace non-representative leaves by their representative via an iso
        cols = [[] for _ in range(M.algebra.vertex_count)]
        for _, best, cls in keyed:
            for i in cls:
                emb = self._transport(reps[best], reps[i], leaves[i][1])
                for v in range(M.algebra.vertex_count):
                    cols[v].append(emb[v])
        witness = []
        for v in range(M.algebra.vertex_count):
            mats = [c for c in cols[v]]
            if mats:
                stacked = np.hstack([m.a for m in mats])
            else:
                stacked = np.zeros((M.dims[v], 0), dtype=np.int64)
            witness.append(FpMatrix(M.field, stacked))
        return Decomposition(pieces, witness)

    def _transport(self, rep_cls: Representation, rep_leaf: Representation, embed: List[FpMatrix]):
        """Columns embedding rep_cls into M through the leaf coordinates."""
        if rep_cls is rep_leaf:
            return embed
        iso = _indec_iso_map(rep_cls, rep_leaf)
        if iso is None:
            raise AssertionError("leaf classified into the wrong iso class")
        return [embed[v] @ iso[v] for v in range(len(embed))]

    def _walk(self, M: Representation, embed: List[FpMatrix], leaves):
        if M.total_dim == 0:
            return
        split = self._find_split(M)
        if split is None:
            leaves.append((M, embed))
            return
        ker_cols, im_cols = split
        for cols in (ker_cols, im_cols):
            sub = _restrict_to_subspace(M, cols)
            sub_embed = [embed[v] @ cols[v] for v in range(len(cols))]
            self._walk(sub, sub_embed, leaves)

    # -- split search and locality certification ---------------------------

    def _find_split(self, M: Representation):
        end = hom_basis(M, M)
        d = end.dim
        if d == 1:
            return None
        field = M.field
        p = field.p
        mats = [hom_to_total_matrix(h, M, M) for h in end.basis]
        shifts = range(p) if p <= 64 else [0, 1]

        def try_candidate(f):
            for lam in shifts:
                g = f if lam == 0 else f - FpMatrix.identity(field, M.total_dim).scale(lam)
                split = _split_by_endo(M, g)
                if split is not None:
                    return split
            return None

        def randoms(count):
            for _ in range(count):
                coeffs = self.rng.integers(0, p, size=d)
                acc = np.zeros((M.total_dim, M.total_dim), dtype=np.int64)
                for i, c in enumerate(coeffs):
                    if c:
                        acc = (acc + int(c) * mats[i].a) % p
                yield FpMatrix(field, acc)

        # phase 1: basis elements and a small random batch
        for f in list(mats) + list(randoms(8)):
            split = try_candidate(f)
            if split is not None:
                return split
        # phase 2: certification decides most cases outright
        outcome = self._certify_local(M, mats)
        if outcome[0] == "local":
            return None
        if outcome[0] == "split":
            split = _split_by_endo(M, outcome[1])
            if split is not None:
                return split
        # phase 3: spend the remaining seeded budget hunting a splitter
        for f in randoms(64 * d):
            split = try_candidate(f)
            if split is not None:
                return split
        raise UndecidedError(
            f"cannot certify (in)decomposability of a module with dims {M.dims}"
        )

    def _certify_local(self, M: Representation, mats: List[FpMatrix]):
        rad = matrix_algebra_radical(mats)
        if rad is None:
            return ("unknown",)
        quo = _QuotientAlgebra(mats, rad)
        if quo.dim == 1:
            return ("local", len(rad))
        p = M.field.p
        # hunt a generator certifying E/rad is a field, or a singular
        # non-nilpotent class certifying a split
        for trial in range(64 * quo.dim):
            if trial < quo.dim:
                coords = np.zeros(quo.dim, dtype=np.int64)
                coords[trial] = 1
            else:
                coords = self.rng.integers(0, p, size=quo.dim)
            if not coords.any():
                continue
            mp = quo.minpoly_of(coords)
            deg = len(mp) - 1
            if deg == quo.dim and poly_is_irreducible(mp, p):
                return ("local", None)
            if mp[0] == 0 and any(c % p for c in mp[1:deg]):
                # t divides the minimal polynomial but mp != t^deg: the class
                # is singular and non-nilpotent, so its lift Fitting-splits M
                return ("split", quo.element(coords))
        return ("unknown",)


_decomp_cache: Dict[Tuple, Decomposition] = {}


def _algebra_signature(alg: BoundQuiver):
    sig = getattr(alg, "_sig", None)
    if sig is None:
        rels = tuple(
            tuple((c, q.source, q.target, q.arrows) for c, q in rel) for rel in alg.relations
        )
        sig = (alg.vertex_count, tuple(alg.quiver.arrows), alg.field.p, rels)
        alg._sig = sig
    return sig


def decompose(M: Representation, seed: int = DEFAULT_SEED) -> Decomposition:
    """Krull-Schmidt decomposition with an explicit invertible witness."""
    key = (_algebra_signature(M.algebra), M.canonical_key(), seed)
    if key not in _decomp_cache:
        _decomp_cache[key] = _Decomposer(seed).decompose(M)
    return _decomp_cache[key]


# -- isomorphism of (certified) indecomposables -----------------------------

_piece_iso_cache: Dict[Tuple, bool] = {}
_end_rad_cache: Dict[Tuple, np.ndarray] = {}


def _end_radical_rows(X: Representation) -> np.ndarray:
    """Reduced row basis of rad End(X) as raveled total matrices (cached)."""
    key = (_algebra_signature(X.algebra), X.canonical_key())
    if key not in _end_rad_cache:
        end = hom_basis(X, X)
        mats = [hom_to_total_matrix(h, X, X) for h in end.basis]
        rad = matrix_algebra_radical(mats)
        if rad is None:
            raise UndecidedError("radical of End could not be certified")
        p = X.field.p
        rows = (
            _span_reduce(np.array([m.a.ravel() for m in rad]), p)
            if rad
            else np.zeros((0, X.total_dim**2), dtype=np.int64)
        )
        _end_rad_cache[key] = rows
    return _end_rad_cache[key]


def _indec_iso_map(X: Representation, Y: Representation):
    """An isomorphism X -> Y of indecomposables, or None (certified).

    For X indecomposable with local End(X), a map f is split exactly when
    some composite g∘f escapes rad End(X); checking the span of composites
    against the radical decides the question deterministically.
    """
    if X.dims != Y.dims:
        return None
    hxy = hom_basis(X, Y)
    if hxy.dim == 0:
        return None
    hyx = hom_basis(Y, X)
    if hyx.dim == 0:
        return None
    p = X.field.p
    rad_rows = _end_radical_rows(X)
    for f in hxy.basis:
        comp_rows = np.array(
            [hom_to_total_matrix(compose_homs(g, f), X, X).a.ravel() for g in hyx.basis],
            dtype=np.int64,
        )
        stacked = np.vstack([rad_rows, comp_rows]) % p
        if len(_rref_array(stacked, p)[1]) != rad_rows.shape[0]:
            # some h∘f is a unit of the local algebra End(X), so f is split
            # mono between indecomposables of equal dimension, hence iso
            return f
    return None


def _indec_iso(X: Representation, Y: Representation) -> bool:
    if X is Y:
        return True
    if X.dims != Y.dims:
        return False
    key = (_algebra_signature(X.algebra),) + tuple(
        sorted((X.canonical_key(), Y.canonical_key()))
    )
    if X.canonical_key() == Y.canonical_key():
        return True
    if key in _piece_iso_cache:
        return _piece_iso_cache[key]
    found = _indec_iso_map(X, Y) is not None
    _piece_iso_cache[key] = found
    return found


def is_isomorphic(M: Representation, N: Representation, seed: int = DEFAULT_SEED) -> bool:
    """Isomorphism test via Krull-Schmidt decomposition and piece matching."""
    if M.dims != N.dims:
        return False
    dm = decompose(M, seed)
    dn = decompose(N, seed)
    if sorted((r.dims, mult) for r, mult in dm.pieces) != sorted(
        (r.dims, mult) for r, mult in dn.pieces
    ):
        return False
    used = [False] * len(dn.pieces)
    for rep_m, mult_m in dm.pieces:
        for j, (rep_n, mult_n) in enumerate(dn.pieces):
            if used[j] or mult_m != mult_n:
                continue
            if _indec_iso(rep_m, rep_n):
                used[j] = True
                break
        else:
            return False
    return True


def end_profile(M: Representation, seed: int = DEFAULT_SEED) -> EndAlgebraProfile:
    """Dimension / radical / locality profile of End(M)."""
    end = hom_basis(M, M)
    if M.total_dim == 0:
        return EndAlgebraProfile(0, 0, False, None)
    mats = [hom_to_total_matrix(h, M, M) for h in end.basis]
    dec = _Decomposer(seed)
    split = dec._find_split(M)
    idem = None
    if split is not None:
        ker_cols, im_cols = split
        field = M.field
        idem = []
        for v in range(M.algebra.vertex_count):
            both = FpMatrix(field, np.hstack([ker_cols[v].a, im_cols[v].a]))
            inv = solve(both, FpMatrix.identity(field, M.dims[v]))
            proj = np.zeros((M.dims[v], M.dims[v]), dtype=np.int64)
            k = ker_cols[v].cols
            sel = np.zeros((M.dims[v], M.dims[v]), dtype=np.int64)
            sel[k:, k:] = np.eye(M.dims[v] - k, dtype=np.int64)
            idem.append(both @ FpMatrix(field, sel) @ inv)
        idem = tuple(idem)
    rad = matrix_algebra_radical(mats)
    rad_dim = len(rad) if rad is not None else None
    is_local = split is None
    return EndAlgebraProfile(end.dim, rad_dim, is_local, idem)


# ---------------------------------------------------------------------------
# JSON interface
# ---------------------------------------------------------------------------


def rep_to_json(rep: Representation) -> dict:
    return {
        "dims": list(rep.dims),
        "maps": {name: m.a.tolist() for name, m in rep.maps.items()},
    }


def rep_from_json(algebra: BoundQuiver, data) -> Representation:
    if isinstance(data, str):
        data = json.loads(data)
    dims = data["dims"]
    maps = {}
    for name, rows in data.get("maps", {}).items():
        a = algebra.quiver.arrow(name)
        arr = np.array(rows, dtype=np.int64)
        if arr.size == 0:
            arr = arr.reshape(dims[a.tgt], dims[a.src])
        maps[name] = FpMatrix(algebra.field, arr)
    return Representation(algebra, dims, maps)
