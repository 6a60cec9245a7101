"""Constructors for the concrete algebras and representations in play:
cohomological Mackey algebras of cyclic p-groups, the full Mackey algebras
of C_p and C_2, the Klein four group algebra, Lewis-diagram representations,
and the two explicit infinite families of non-isomorphic indecomposables.

Vertex convention for cyclic groups: vertex i carries the permutation
module of dimension p^i, so vertex 0 is the fixed level G/G and vertex m
is the free level G/e.  Restriction a_i points from i-1 to i, transfer b_i
from i to i-1, and c_i is the loop at i (multiplication by x at that
level); this is the opposite algebra of the endomorphism presentation.

In characteristic 2 the loop c_1 equals a_1 b_1, so it is eliminated from
the quiver (keeping it would need the inadmissible relation a_1b_1 - c_1).
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Dict, List, Optional

import numpy as np

from .fields import FpMatrix, PrimeField, is_prime
from .quiver import BoundQuiverAlgebra, PathWord, Quiver, Relation, build_algebra
from .reps import Representation


@dataclass
class MackeyPresentation:
    group: str
    flavor: str  # "cohomological" | "full" | "group-algebra"
    algebra: BoundQuiverAlgebra
    names: Dict[str, str] = dc_field(default_factory=dict)
    notes: str = ""


def _word(quiver: Quiver, *names: str) -> PathWord:
    return PathWord.from_names(quiver, list(names))


@lru_cache(maxsize=None)
def coh_mackey_cyclic(p: int, m: int) -> MackeyPresentation:
    """The cohomological Mackey algebra of the cyclic group of order p^m."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if m < 0:
        raise ValueError("m must be >= 0")
    field = PrimeField(p)
    if m == 0:
        alg = build_algebra(Quiver(1, []), [], field, 2)
        return MackeyPresentation(f"C{p**m}", "cohomological", alg, {})

    def aname(i):
        return "a" if m == 1 else f"a{i}"

    def bname(i):
        return "b" if m == 1 else f"b{i}"

    def cname(i):
        return "c" if m == 1 else f"c{i}"

    arrows = []
    names = {}
    for i in range(1, m + 1):
        arrows.append((aname(i), i - 1, i))
        arrows.append((bname(i), i, i - 1))
        names[f"a_{i}"] = aname(i)
        names[f"b_{i}"] = bname(i)
    drop_c1 = p == 2
    for i in range(1, m + 1):
        if i == 1 and drop_c1:
            continue
        arrows.append((cname(i), i, i))
        names[f"c_{i}"] = cname(i)
    quiver = Quiver(m + 1, arrows)

    def cpow(i, k) -> List[str]:
        if i == 1 and drop_c1:
            # c_1 = a_1 b_1
            return [aname(1), bname(1)] * k
        return [cname(i)] * k

    rels = []
    w = lambda names_: _word(quiver, *names_)
    for i in range(1, m + 1):
        e_i = p**i
        e_prev = p ** (i - 1)
        # b_i a_i = 0
        rels.append(Relation([(1, w([bname(i), aname(i)]))], p))
        # c_i^{p^i} = 0; for the eliminated loop this is implied by b_1 a_1
        if not (i == 1 and drop_c1):
            rels.append(Relation([(1, w(cpow(i, e_i)))], p))
            # a_i b_i = c_i^{p^i - p^{i-1}}
            rels.append(
                Relation([(1, w([aname(i), bname(i)])), (-1, w(cpow(i, e_i - e_prev)))], p)
            )
        if i >= 2:
            # c_i a_i = a_i c_{i-1}, with c_0 = 0
            rels.append(
                Relation(
                    [(1, w([cname(i), aname(i)])), (-1, w([aname(i)] + cpow(i - 1, 1)))], p
                )
            )
            rels.append(
                Relation(
                    [(1, w(cpow(i - 1, 1) + [bname(i)])), (-1, w([bname(i), cname(i)]))], p
                )
            )
        elif not (i == 1 and drop_c1):
            rels.append(Relation([(1, w([cname(1), aname(1)]))], p))
            rels.append(Relation([(1, w([bname(1), cname(1)]))], p))
    alg = build_algebra(quiver, rels, field, p**m + 2)
    return MackeyPresentation(f"C{p**m}", "cohomological", alg, names)


@lru_cache(maxsize=None)
def mackey_cp(p: int) -> MackeyPresentation:
    """The full Mackey algebra of C_p in characteristic p.

    For odd p this is the three-arrow quiver with relations
    {c^p, ca, bc, ab - c^{p-1}} (no ba).  For p = 2 the relation ab = c is
    inadmissible, so the loop is eliminated and mackey_c2() is returned.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        return mackey_c2()
    field = PrimeField(p)
    quiver = Quiver(2, [("a", 0, 1), ("b", 1, 0), ("c", 1, 1)])
    w = lambda *n: _word(quiver, *n)
    rels = [
        Relation([(1, w(*(["c"] * p)))], p),
        Relation([(1, w("c", "a"))], p),
        Relation([(1, w("b", "c"))], p),
        Relation([(1, w("a", "b")), (-1, w(*(["c"] * (p - 1))))], p),
    ]
    alg = build_algebra(quiver, rels, field, p + 2)
    names = {"res": "a", "tr": "b", "c": "c", "gamma": "1 - c"}
    return MackeyPresentation(f"C{p}", "full", alg, names)


@lru_cache(maxsize=None)
def mackey_c2() -> MackeyPresentation:
    """The full Mackey algebra of C_2 in characteristic 2: relations aba, bab."""
    field = PrimeField(2)
    quiver = Quiver(2, [("a", 0, 1), ("b", 1, 0)])
    w = lambda *n: _word(quiver, *n)
    rels = [Relation([(1, w("a", "b", "a"))], 2), Relation([(1, w("b", "a", "b"))], 2)]
    alg = build_algebra(quiver, rels, field, 5)
    names = {"res": "a", "tr": "b", "c": "ab", "gamma": "1 - ab"}
    return MackeyPresentation("C2", "full", alg, names)


@lru_cache(maxsize=None)
def klein_four_algebra() -> BoundQuiverAlgebra:
    """k[a,b]/(a^2, b^2, ab - ba) = k[C_2 x C_2] in characteristic 2."""
    field = PrimeField(2)
    quiver = Quiver(1, [("a", 0, 0), ("b", 0, 0)])
    w = lambda *n: _word(quiver, *n)
    rels = [
        Relation([(1, w("a", "a"))], 2),
        Relation([(1, w("b", "b"))], 2),
        Relation([(1, w("a", "b")), (-1, w("b", "a"))], 2),
    ]
    return build_algebra(quiver, rels, field, 5)


# ---------------------------------------------------------------------------
# Lewis-diagram representations of the full Mackey algebra of C_p
# ---------------------------------------------------------------------------


def constant_mackey_rep(p: int) -> Representation:
    """The constant Mackey functor underline(F_p): res = 1, tr = 0, gamma = 1."""
    pres = mackey_cp(p)
    alg = pres.algebra
    field = alg.field
    one = FpMatrix(field, [[1]])
    zero = FpMatrix(field, [[0]])
    maps = {"a": one, "b": zero}
    if p != 2:
        maps["c"] = zero  # c = 1 - gamma = 0
    rep = Representation(alg, (1, 1), maps)
    if not rep.validate():
        raise AssertionError("constant Mackey representation failed validation")
    return rep


def fixed_point_rep(p: int, gamma: FpMatrix) -> Representation:
    """The fixed point Mackey functor of a k[C_p]-module given by its gamma action.

    Vertex 0 carries the fixed points ker(gamma - 1), vertex 1 the module
    itself; res is the inclusion, tr is sum gamma^i, and c = 1 - gamma.
    """
    pres = mackey_cp(p)
    alg = pres.algebra
    field = alg.field
    if gamma.field != field:
        raise ValueError("gamma must be over F_p")
    n = gamma.rows
    eye = FpMatrix.identity(field, n)
    if n and gamma.power(p) != eye:
        raise ValueError("gamma^p must be the identity")
    from .fields import kernel_basis, solve

    fixed = kernel_basis(gamma - eye)  # columns span V^{C_p}
    d0 = fixed.cols
    tr_total = FpMatrix.zeros(field, n, n)
    g = eye
    for _ in range(p):
        tr_total = tr_total + g
        g = g @ gamma
    # tr lands in the fixed points; express it in their basis
    tr_coords = solve(fixed, tr_total)
    if tr_coords is None:
        raise AssertionError("transfer image not contained in the fixed points")
    maps = {"a": fixed, "b": tr_coords}
    if p != 2:
        maps["c"] = eye - gamma
    rep = Representation(alg, (d0, n), maps)
    if not rep.validate():
        raise AssertionError("fixed point representation failed validation")
    return rep


def regular_gamma(p: int) -> FpMatrix:
    """The regular representation of C_p: cyclic permutation matrix."""
    field = PrimeField(p)
    a = np.zeros((p, p), dtype=np.int64)
    for i in range(p):
        a[(i + 1) % p, i] = 1
    return FpMatrix(field, a)


# ---------------------------------------------------------------------------
# the two infinite families of indecomposables
# ---------------------------------------------------------------------------


def _jordan_x(field: PrimeField, n: int) -> FpMatrix:
    """Multiplication by x on k[x]/(x^n): nilpotent single Jordan block."""
    a = np.zeros((n, n), dtype=np.int64)
    for i in range(1, n):
        a[i, i - 1] = 1
    return FpMatrix(field, a)


def _two_block(field: PrimeField, n: int, top_right: FpMatrix) -> FpMatrix:
    z = np.zeros((2 * n, 2 * n), dtype=np.int64)
    z[:n, n:] = top_right.a
    return FpMatrix(field, z)


def infinite_family_c4(n: int) -> Representation:
    """The n-th member of the infinite family over coh Mackey of C_4.

    Dimension vector (V, V^2, V^2) for V = k[x]/(x^n); the four maps are the
    displayed 2x2 blocks with the nilpotent x in the b-block.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    pres = coh_mackey_cyclic(2, 2)
    alg = pres.algebra
    field = alg.field
    X = _jordan_x(field, n)
    eye = FpMatrix.identity(field, n)
    shift_eye = _two_block(field, n, eye)  # (0 1; 0 0) blocks
    shift_x = _two_block(field, n, X)  # (0 x; 0 0)
    # vertices (0, 1, 2) carry (V, V^2, V^2);  a2: 1->2, b2: 2->1, c2 at 2,
    # a1: 0->1, b1: 1->0
    E = FpMatrix(field, np.hstack([np.zeros((n, n), dtype=np.int64), np.eye(n, dtype=np.int64)]))
    D = FpMatrix(field, np.vstack([np.eye(n, dtype=np.int64), np.zeros((n, n), dtype=np.int64)]))
    dims = (n, 2 * n, 2 * n)
    maps = {
        "a2": shift_eye,  # A: vertex1 -> vertex2
        "b2": shift_x,  # B: vertex2 -> vertex1
        "c2": shift_eye,  # C: loop at vertex 2
        "b1": E,  # E: vertex1 -> vertex0
        "a1": D,  # D: vertex0 -> vertex1
    }
    rep = Representation(alg, dims, maps)
    if not rep.validate():
        raise AssertionError("C4 family member failed validation")
    return rep


def infinite_family_cpm(p: int, m: int, n: int) -> Representation:
    """Family member supported on vertices m and m-1 of coh Mackey of C_{p^m}."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if m < 2 or p**m <= 4:
        raise ValueError("family requires m >= 2 and p^m > 4")
    pres = coh_mackey_cyclic(p, m)
    alg = pres.algebra
    field = alg.field
    X = _jordan_x(field, n)
    eye = FpMatrix.identity(field, n)
    shift_eye = _two_block(field, n, eye)
    shift_x = _two_block(field, n, X)
    dims = [0] * (m + 1)
    dims[m] = 2 * n
    dims[m - 1] = 2 * n
    maps = {
        f"a{m}": shift_eye,  # A: m-1 -> m
        f"b{m}": shift_x,  # B: m -> m-1
        f"c{m}": shift_eye,  # C at m
    }
    cm1 = f"c{m-1}"
    if cm1 in pres.algebra.quiver.index:
        maps[cm1] = shift_eye  # D at m-1
    rep = Representation(alg, dims, maps)
    if not rep.validate():
        raise AssertionError("C_{p^m} family member failed validation")
    return rep
