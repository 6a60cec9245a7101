"""Executable wildness witnesses: representation embeddings and strict
families of complexes, with a desk-scale verification harness.

The verification is extensional: the harness never tries to prove a
universally quantified wildness statement.  It checks, over a finite test
set of modules for the wild three-vertex quiver, that the functor reflects
isomorphisms (F M iso F N exactly when M iso N) and that indecomposable
inputs give indecomposable outputs.  Any counterexample is reported as a
hard failure with a witness pair.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .complexes import ProjComplex, to_representation_of_tensor
from .fields import FpMatrix, PrimeField, kernel_basis
from .mackey import klein_four_algebra, mackey_c2
from .quiver import BoundQuiverAlgebra, PathWord, Quiver, Relation, build_algebra
from .reps import (
    Representation,
    decompose,
    direct_sum,
    hom_dim,
    is_isomorphic,
)

DEFAULT_SEED = 0xC0FFEE


# ---------------------------------------------------------------------------
# modules over the free algebra and the wild quiver
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SigmaModule:
    """A module over the free algebra on two generators: (V, X, Y)."""

    x: FpMatrix
    y: FpMatrix

    def __post_init__(self):
        if self.x.shape != self.y.shape or self.x.rows != self.x.cols:
            raise ValueError("X and Y must be square of equal size")

    @property
    def dim(self) -> int:
        return self.x.rows

    @property
    def field(self) -> PrimeField:
        return self.x.field


def hom_dim_sigma(v: SigmaModule, u: SigmaModule) -> int:
    """dim of {phi : phi X_v = X_u phi, phi Y_v = Y_u phi}."""
    p = v.field.p
    nv, nu = v.dim, u.dim
    if nv == 0 or nu == 0:
        return 0
    rows = []
    for mv, mu in ((v.x, u.x), (v.y, u.y)):
        block = np.kron(np.eye(nu, dtype=np.int64), mv.a.T) - np.kron(
            mu.a, np.eye(nv, dtype=np.int64)
        )
        rows.append(block % p)
    mat = FpMatrix(v.field, np.vstack(rows))
    return kernel_basis(mat).cols


@lru_cache(maxsize=None)
def gamma_algebra(p: int) -> BoundQuiverAlgebra:
    """Path algebra of the wild quiver 1 ==(a,b)==> 2 --w--> 3 (no relations)."""
    quiver = Quiver(3, [("a", 0, 1), ("b", 0, 1), ("w", 1, 2)])
    return build_algebra(quiver, [], PrimeField(p), 3)


@dataclass(frozen=True)
class GammaModule:
    """dims (r, s, t) with A, B : k^r -> k^s and W : k^s -> k^t."""

    a: FpMatrix
    b: FpMatrix
    w: FpMatrix

    def __post_init__(self):
        if self.a.shape != self.b.shape or self.w.cols != self.a.rows:
            raise ValueError("incompatible Gamma module shapes")

    @property
    def dims(self) -> Tuple[int, int, int]:
        return (self.a.cols, self.a.rows, self.w.rows)

    @property
    def field(self) -> PrimeField:
        return self.a.field

    def to_representation(self) -> Representation:
        alg = gamma_algebra(self.field.p)
        return Representation(alg, self.dims, {"a": self.a, "b": self.b, "w": self.w})


def gamma_module(field: PrimeField, A, B, W) -> GammaModule:
    return GammaModule(FpMatrix(field, A), FpMatrix(field, B), FpMatrix(field, W))


def direct_sum_gamma(m1: GammaModule, m2: GammaModule) -> GammaModule:
    from .fields import block_diag

    return GammaModule(
        block_diag([m1.a, m2.a]), block_diag([m1.b, m2.b]), block_diag([m1.w, m2.w])
    )


# ---------------------------------------------------------------------------
# representation embeddings
# ---------------------------------------------------------------------------


def free_to_sigma(mats: Sequence[FpMatrix]) -> SigmaModule:
    """Embed a k<x_1..x_n>-module (n > 1) into k<x, y>-modules.

    A is block lower bidiagonal with the X_i on the diagonal and identities
    below; B is the alternating projection diag(1, 0, 1, 0, ...).
    """
    n = len(mats)
    if n <= 1:
        raise ValueError("need at least two generators")
    field = mats[0].field
    v = mats[0].rows
    for m in mats:
        if m.shape != (v, v):
            raise ValueError("all generator matrices must be square of equal size")
    A = np.zeros((n * v, n * v), dtype=np.int64)
    B = np.zeros((n * v, n * v), dtype=np.int64)
    eye = np.eye(v, dtype=np.int64)
    for i in range(n):
        A[i * v : (i + 1) * v, i * v : (i + 1) * v] = mats[i].a
        if i > 0:
            A[i * v : (i + 1) * v, (i - 1) * v : i * v] = eye
        if i % 2 == 0:
            B[i * v : (i + 1) * v, i * v : (i + 1) * v] = eye
    return SigmaModule(FpMatrix(field, A), FpMatrix(field, B))


def sigma_to_gamma(sm: SigmaModule) -> GammaModule:
    """The fully faithful bimodule functor V |-> (V^2 ==> V^2 -> V)."""
    field = sm.field
    v = sm.dim
    eye = np.eye(v, dtype=np.int64)
    zero = np.zeros((v, v), dtype=np.int64)
    A = np.block([[sm.x.a, sm.y.a], [eye, zero]]) if v else np.zeros((0, 0), dtype=np.int64)
    B = np.eye(2 * v, dtype=np.int64)
    W = np.hstack([zero, eye]) if v else np.zeros((0, 0), dtype=np.int64)
    return GammaModule(FpMatrix(field, A), FpMatrix(field, B), FpMatrix(field, W))


@lru_cache(maxsize=None)
def d7_algebra(p: int) -> BoundQuiverAlgebra:
    """The commutative-squares quiver of type D~~_7 used for C_8 and C_9.

    Nine vertices; two commutativity relations, one per diamond.
    """
    arrows = [
        ("r0", 0, 2),
        ("r1", 0, 3),
        ("r2", 1, 4),
        ("r3", 1, 5),
        ("r4", 2, 5),
        ("r5", 2, 6),
        ("r6", 3, 6),
        ("r7", 3, 7),
        ("r8", 4, 8),
        ("r9", 5, 8),
    ]
    quiver = Quiver(9, arrows)
    w = lambda *names: PathWord.from_names(quiver, list(names))
    rels = [
        Relation([(1, w("r5", "r0")), (-1, w("r6", "r1"))], p),
        Relation([(1, w("r9", "r3")), (-1, w("r8", "r2"))], p),
    ]
    return build_algebra(quiver, rels, PrimeField(p), 4)


def d7_embed(sm: SigmaModule) -> Representation:
    """The explicit bimodule embedding of k<x,y>-modules into the D~~_7 quiver."""
    field = sm.field
    v = sm.dim
    X, Y = sm.x.a, sm.y.a
    eye = np.eye(v, dtype=np.int64)
    zero = np.zeros((v, v), dtype=np.int64)

    def blocks(rows):
        if v == 0:
            return FpMatrix.zeros(field, 0, 0)
        return FpMatrix(field, np.block(rows))

    dims = (2 * v, 2 * v, 4 * v, 2 * v, 2 * v, 4 * v, 2 * v, v, 2 * v)
    maps = {
        "r0": blocks([[eye, zero], [zero, Y], [zero, eye], [eye, X]]),
        "r1": blocks([[eye, zero], [zero, eye]]),
        "r2": blocks([[eye, zero], [zero, eye]]),
        "r3": blocks([[eye, zero], [zero, eye], [eye, zero], [zero, eye]]),
        "r4": blocks([[eye, zero, zero, zero], [zero, eye, zero, zero],
                      [zero, zero, eye, zero], [zero, zero, zero, eye]]),
        "r5": blocks([[zero, zero, eye, zero], [zero, zero, zero, eye]]),
        "r6": blocks([[zero, eye], [eye, X]]),
        "r7": blocks([[zero, eye]]),
        "r8": blocks([[eye, zero], [zero, eye]]),
        "r9": blocks([[eye, zero, zero, zero], [zero, eye, zero, zero]]),
    }
    if v == 0:
        maps = {}
    alg = d7_algebra(field.p)
    rep = Representation(alg, dims, maps)
    defect = rep.relation_defect()
    if defect is not None:
        raise AssertionError("D~~_7 embedding failed the commutativity relations")
    return rep


# ---------------------------------------------------------------------------
# strict families of complexes
# ---------------------------------------------------------------------------

TensorElement = Dict[int, np.ndarray]  # gamma basis index -> algebra element


@dataclass
class StrictFamilySpec:
    """A perfect complex of (algebra, Gamma)-bimodules given blockwise.

    components[d]: list of (algebra vertex, gamma vertex) for each block.
    diffs[d][i][j]: TensorElement mapping block j of degree d+1 to block i
    of degree d.  d^2 = 0 is checked symbolically at construction.
    """

    name: str
    algebra: BoundQuiverAlgebra
    gamma: BoundQuiverAlgebra
    lo: int
    components: Dict[int, List[Tuple[int, int]]]
    diffs: Dict[int, list]

    def __post_init__(self):
        self.hi = max(self.components)
        defect = self._d_squared_defect()
        if defect is not None:
            raise AssertionError(f"template d^2 != 0 at degree {defect}")

    def _tensor_mult(self, e1: TensorElement, e0: TensorElement) -> TensorElement:
        """Composite of e1 (applied first) then e0."""
        alg, gam = self.algebra, self.gamma
        p = alg.field.p
        out: TensorElement = {}
        for g1, l1 in e1.items():
            for g0, l0 in e0.items():
                lam = alg.multiply(l1, l0)
                if not lam.any():
                    continue
                # gamma side acts by left multiplication, so the order flips
                gvec = gam.multiply(gam.path_vector(gam.basis[g0]), gam.path_vector(gam.basis[g1]))
                for gg in np.nonzero(gvec)[0]:
                    gg = int(gg)
                    acc = out.get(gg)
                    term = (int(gvec[gg]) * lam) % p
                    out[gg] = term if acc is None else (acc + term) % p
        return {g: v for g, v in out.items() if v.any()}

    def _d_squared_defect(self) -> Optional[int]:
        for d in range(self.lo, self.hi - 1):
            D1 = self.diffs[d + 1]
            D0 = self.diffs[d]
            for i in range(len(self.components[d])):
                for k in range(len(self.components[d + 2])):
                    acc: TensorElement = {}
                    for j in range(len(self.components[d + 1])):
                        term = self._tensor_mult(D1[j][k], D0[i][j])
                        for g, vec in term.items():
                            prev = acc.get(g)
                            acc[g] = vec if prev is None else (prev + vec) % self.algebra.field.p
                    if any(v.any() for v in acc.values()):
                        return d
        return None


def _gamma_path_matrix(gm: GammaModule, gamma_alg: BoundQuiverAlgebra, gidx: int) -> FpMatrix:
    q = gamma_alg.basis[gidx]
    rep = gm.to_representation()
    return rep.path_matrix(q)


def strict_apply(spec: StrictFamilySpec, gm: GammaModule) -> ProjComplex:
    """Tensor the bimodule template with a Gamma module."""
    alg = spec.algebra
    gam = spec.gamma
    p = alg.field.p
    if gm.field.p != p:
        raise ValueError("field mismatch between family and module")
    dims = gm.dims
    grep = gm.to_representation()
    components = {}
    for d in range(spec.lo, spec.hi + 1):
        comp = []
        for (v, gv) in spec.components[d]:
            comp.extend([v] * dims[gv])
        components[d] = comp
    diffs = {}
    for d in range(spec.lo, spec.hi):
        src_blocks = spec.components[d + 1]
        tgt_blocks = spec.components[d]
        rows = []
        for i, (tv, tgv) in enumerate(tgt_blocks):
            for rr in range(dims[tgv]):
                row = []
                for j, (sv, sgv) in enumerate(src_blocks):
                    entry = spec.diffs[d][i][j]
                    for cc in range(dims[sgv]):
                        acc = alg.zero()
                        for gidx, lam in entry.items():
                            q = gam.basis[gidx]
                            mat = grep.path_matrix(q)  # dims[t(q)] x dims[s(q)]
                            if q.source != sgv or q.target != tgv:
                                if mat.rows and mat.cols and lam.any():
                                    raise AssertionError("gamma entry in wrong block")
                                continue
                            c = int(mat.a[rr, cc]) if mat.rows and mat.cols else 0
                            if c:
                                acc = (acc + c * lam) % p
                        row.append(acc)
                rows.append(row)
        diffs[d] = rows
    return ProjComplex(alg, spec.lo, components, diffs)


def _te(alg: BoundQuiverAlgebra, gam: BoundQuiverAlgebra, *terms) -> TensorElement:
    """TensorElement from (lambda element, gamma path name or 'e0'..) pairs."""
    out: TensorElement = {}
    for lam, gname in terms:
        if gname.startswith("e") and gname[1:].isdigit():
            q = PathWord.trivial(int(gname[1:]))
        else:
            q = PathWord.from_names(gam.quiver, [gname])
        vec = gam.path_vector(q)
        idxs = np.nonzero(vec)[0]
        assert len(idxs) == 1
        g = int(idxs[0])
        prev = out.get(g)
        out[g] = lam % alg.field.p if prev is None else (prev + lam) % alg.field.p
    return {g: v for g, v in out.items() if v.any()}


@lru_cache(maxsize=None)
def truncated_polynomial_algebra(n: int, p: int) -> BoundQuiverAlgebra:
    """k[c]/(c^{n+1}) as a one-vertex bound quiver."""
    quiver = Quiver(1, [("c", 0, 0)])
    rel = Relation([(1, PathWord.from_names(quiver, ["c"] * (n + 1)))], p)
    return build_algebra(quiver, [rel], PrimeField(p), n + 2)


@lru_cache(maxsize=None)
def two_commuting_nilpotents_algebra(n: int, p: int) -> BoundQuiverAlgebra:
    """k[s,t]/(s^n, t^n) as a one-vertex bound quiver with commuting loops."""
    quiver = Quiver(1, [("s", 0, 0), ("t", 0, 0)])
    w = lambda *names: PathWord.from_names(quiver, list(names))
    rels = [
        Relation([(1, w(*["s"] * n))], p),
        Relation([(1, w(*["t"] * n))], p),
        Relation([(1, w("s", "t")), (-1, w("t", "s"))], p),
    ]
    return build_algebra(quiver, rels, PrimeField(p), 2 * n)


def trunc_poly_family(n: int, p: int) -> StrictFamilySpec:
    """The seven-term strict family over k[c]/(c^{n+1}), n >= 2."""
    if n < 2:
        raise ValueError("n must be >= 2")
    alg = truncated_polynomial_algebra(n, p)
    gam = gamma_algebra(p)
    c = lambda k: alg.path_vector(PathWord.from_names(alg.quiver, ["c"] * k)) if k else alg.unit()
    e = lambda lam: _te(alg, gam, (lam, "e0"))
    minus = lambda vec: (-vec) % p
    comps = {
        0: [(0, 2)],
        1: [(0, 1)],
        2: [(0, 0), (0, 0)],
        3: [(0, 0), (0, 0)],
        4: [(0, 0), (0, 0)],
        5: [(0, 0), (0, 0)],
        6: [(0, 0)],
    }
    diffs = {
        5: [[e(c(n))], [e(c(n - 1))]],
        4: [[e(minus(c(n - 1))), e(c(n))], [e(c(n - 1)), e(alg.zero())]],
        3: [[e(c(n)), e(alg.zero())], [e(alg.zero()), e(c(n))]],
        2: [[e(c(n)), e(alg.zero())], [e(alg.zero()), e(c(n - 1))]],
        1: [[_te(alg, gam, (c(n - 1), "a")), _te(alg, gam, (c(n), "b"))]],
        0: [[_te(alg, gam, (c(n), "w"))]],
    }
    return StrictFamilySpec(f"trunc-poly({n})", alg, gam, 0, comps, diffs)


def two_vars_family(n: int, p: int) -> StrictFamilySpec:
    """The three-term strict family over k[s,t]/(s^n, t^n), n >= 2."""
    if n < 2:
        raise ValueError("n must be >= 2")
    alg = two_commuting_nilpotents_algebra(n, p)
    gam = gamma_algebra(p)
    w = lambda *names: PathWord.from_names(alg.quiver, list(names))
    s = alg.path_vector(w("s"))
    t = alg.path_vector(w("t"))
    st_pow = alg.path_vector(w(*(["s", "t"] * (n - 1))))
    comps = {0: [(0, 2)], 1: [(0, 1)], 2: [(0, 0)]}
    diffs = {
        1: [[_te(alg, gam, (s, "a"), (t, "b"))]],
        0: [[_te(alg, gam, (st_pow, "w"))]],
    }
    return StrictFamilySpec(f"two-vars({n})", alg, gam, 0, comps, diffs)


def mackey_c2_family() -> StrictFamilySpec:
    """The seven-term strict family over the full Mackey algebra of C_2."""
    alg = mackey_c2().algebra
    gam = gamma_algebra(2)
    w = lambda *names: PathWord.from_names(alg.quiver, list(names))
    a = alg.path_vector(w("a"))
    b = alg.path_vector(w("b"))
    ab = alg.path_vector(w("a", "b"))
    ba = alg.path_vector(w("b", "a"))
    z = alg.zero()
    e = lambda lam: _te(alg, gam, (lam, "e0"))
    comps = {
        0: [(1, 2)],
        1: [(1, 1)],
        2: [(0, 0), (1, 0)],
        3: [(0, 0), (0, 0)],
        4: [(0, 0), (0, 0)],
        5: [(1, 0), (0, 0)],
        6: [(1, 0)],
    }
    diffs = {
        5: [[e(ab)], [e(a)]],
        4: [[e((-a) % 2), e(ba)], [e(a), e(z)]],
        3: [[e(ba), e(z)], [e(z), e(ba)]],
        2: [[e(ba), e(z)], [e(z), e(b)]],
        1: [[_te(alg, gam, (b, "a")), _te(alg, gam, (ab, "b"))]],
        0: [[_te(alg, gam, (ab, "w"))]],
    }
    return StrictFamilySpec("mackey-c2", alg, gam, 0, comps, diffs)


def family_by_name(name: str, n: int = 2, p: int = 2) -> StrictFamilySpec:
    if name == "trunc-poly":
        return trunc_poly_family(n, p)
    if name == "two-vars":
        return two_vars_family(n, p)
    if name == "mackey-c2":
        if p != 2:
            raise ValueError("the Mackey C_2 family lives in characteristic 2")
        return mackey_c2_family()
    raise ValueError(f"unknown family {name!r}")


# ---------------------------------------------------------------------------
# test sets and the verification harness
# ---------------------------------------------------------------------------


def exhaustive_gamma_modules(p: int, rmax: int, smax: int, tmax: int) -> List[GammaModule]:
    field = PrimeField(p)
    out = []
    for r in range(rmax + 1):
        for s in range(smax + 1):
            for t in range(tmax + 1):
                a_entries = itertools.product(range(p), repeat=s * r)
                for a_flat in a_entries:
                    A = np.array(a_flat, dtype=np.int64).reshape(s, r)
                    for b_flat in itertools.product(range(p), repeat=s * r):
                        B = np.array(b_flat, dtype=np.int64).reshape(s, r)
                        for w_flat in itertools.product(range(p), repeat=t * s):
                            W = np.array(w_flat, dtype=np.int64).reshape(t, s)
                            out.append(gamma_module(field, A, B, W))
    return out


def sampled_gamma_modules(
    p: int, dims: Tuple[int, int, int], count: int, seed: int = DEFAULT_SEED
) -> List[GammaModule]:
    field = PrimeField(p)
    rng = np.random.default_rng(seed)
    out = []
    r, s, t = dims
    for _ in range(count):
        ri = int(rng.integers(0, r + 1))
        si = int(rng.integers(0, s + 1))
        ti = int(rng.integers(0, t + 1))
        A = rng.integers(0, p, size=(si, ri))
        B = rng.integers(0, p, size=(si, ri))
        W = rng.integers(0, p, size=(ti, si))
        out.append(gamma_module(field, A, B, W))
    return out


@dataclass
class VerificationReport:
    family: str
    passed: bool
    pairs_checked: int
    failures: List[dict]
    seed: int

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "pass": self.passed,
            "pairs_checked": self.pairs_checked,
            "failures": self.failures,
            "seed": self.seed,
        }


def verify_strict_family(
    spec: StrictFamilySpec,
    test_set: Sequence[GammaModule],
    seed: int = DEFAULT_SEED,
) -> VerificationReport:
    """Check iso-reflection and indecomposability preservation on a test set."""
    failures = []
    gamma_reps = [gm.to_representation() for gm in test_set]
    complexes = [strict_apply(spec, gm) for gm in test_set]
    tensor_reps = []
    lo = min((c.lo for c in complexes), default=0)
    hi = max((c.hi for c in complexes), default=0)
    for i, cx in enumerate(complexes):
        if not cx.is_minimal():
            failures.append({"kind": "not-minimal", "index": i})
        rep, _ = to_representation_of_tensor(cx.pad(lo, hi))
        tensor_reps.append(rep)
    # indecomposability preservation
    for i, grep in enumerate(gamma_reps):
        if grep.total_dim == 0:
            continue
        if len(decompose(grep, seed).summand_list()) == 1:
            pieces = decompose(tensor_reps[i], seed).summand_list()
            if tensor_reps[i].total_dim and len(pieces) != 1:
                failures.append(
                    {"kind": "indecomposability", "index": i, "pieces": len(pieces)}
                )
    # iso reflection (both directions, every unordered pair)
    pairs = 0
    for i in range(len(test_set)):
        for j in range(i + 1, len(test_set)):
            pairs += 1
            mod_iso = is_isomorphic(gamma_reps[i], gamma_reps[j], seed)
            cx_iso = is_isomorphic(tensor_reps[i], tensor_reps[j], seed)
            if mod_iso != cx_iso:
                failures.append(
                    {"kind": "iso-reflection", "pair": [i, j],
                     "module_iso": mod_iso, "complex_iso": cx_iso}
                )
    return VerificationReport(spec.name, not failures, pairs, failures, seed)
